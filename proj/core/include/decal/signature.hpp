#pragma once

#include <string>

#include "decal/errors.hpp"

namespace decal {

/// Derives the per-block dimension m = floor(d / (1+p+q+r)).
/// Throws InvalidSignature when the result would be zero.
int derive_m(int d, int p, int q, int r);

/// Algebra descriptor for Cl_{p,q,r}(R^m) embeddings of row width d.
///
/// Generators carry a single flat index 1..p+q+r. Indices 1..p square to +1,
/// p+1..p+q square to -1, and the remaining r indices are nilpotent
/// (square 0). m is always recomputed from (p,q,r,d) at construction.
class Signature {
public:
    Signature(int p, int q, int r, int d);

    int p() const { return p_; }
    int q() const { return q_; }
    int r() const { return r_; }
    int d() const { return d_; }
    int m() const { return m_; }

    /// Number of generators, p+q+r.
    int generators() const { return p_ + q_ + r_; }

    /// Number of coefficient blocks, 1+p+q+r (scalar block included).
    int blocks() const { return generators() + 1; }

    /// Scalars of a row that actually participate: (1+p+q+r)*m <= d.
    int active_width() const { return blocks() * m_; }

    /// Square of generator t (1-based): +1, -1 or 0.
    int square(int t) const;

    /// "Cl_{p,q,r}(R^m)" for messages and manifests.
    std::string str() const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    int p_, q_, r_, d_, m_;
};

} // namespace decal
