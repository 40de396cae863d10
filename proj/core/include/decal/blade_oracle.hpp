#pragma once

#include <vector>

#include "decal/element.hpp"
#include "decal/signature.hpp"

namespace decal {

/// Largest generator count the brute-force oracle accepts.
inline constexpr int kOracleMaxGenerators = 10;

/// Dense multivector over all 2^n blades of Cl_{p,q,r}(R^m), used as a
/// brute-force reference for the grade-truncated fast path. Blade index is a
/// bitmask: bit t set means generator e_{t+1} is present.
struct FullMultivector {
    int n = 0;
    int m = 0;
    std::vector<std::vector<double>> coeffs;

    static FullMultivector zero(int n, int m);
};

/// Embeds a grade-<=1 element into the full blade basis.
FullMultivector lift(const CliffordElement& x, const Signature& sig);

/// Sign of reordering blade a against blade b (transposition count), without
/// the metric contraction.
int blade_reorder_sign(unsigned a, unsigned b);

/// Exact blade-level geometric product. Each blade pair is reduced generator
/// by generator: transposition swaps fix the sign, repeated generators
/// contract through their square (+1, -1 or 0).
FullMultivector oracle_product(const FullMultivector& x, const FullMultivector& y,
                               const Signature& sig);

} // namespace decal
