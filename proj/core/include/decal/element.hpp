#pragma once

#include <map>
#include <utility>
#include <vector>

#include "decal/signature.hpp"

namespace decal {

/// Grade-<=1 element of Cl_{p,q,r}(R^m): one scalar block plus p+q+r vector
/// blocks, each of length m. Block 0 is the scalar part; block t holds the
/// e_t coefficient for t = 1..p+q+r.
struct CliffordElement {
    std::vector<std::vector<double>> blocks;

    static CliffordElement zero(const Signature& sig);

    /// Multiplicative identity: scalar block all ones, vector blocks zero.
    static CliffordElement identity(const Signature& sig);
};

/// Ordered generator pair (a,b) with a < b, both 1-based.
using BasisPair = std::pair<int, int>;

/// Grade-<=2 element produced by multiplying two grade-<=1 elements.
///
/// grade2 holds one entry per unordered generator pair, keyed (a,b) with
/// a < b; the (b,a) coefficient is the negation and is never stored.
struct ProductResult {
    std::vector<double> scalar;
    std::vector<std::vector<double>> grade1;
    std::map<BasisPair, std::vector<double>> grade2;
};

} // namespace decal
