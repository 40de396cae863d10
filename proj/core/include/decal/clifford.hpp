#pragma once

#include "decal/element.hpp"
#include "decal/signature.hpp"

namespace decal {

/// Clifford product of two grade-<=1 elements, expanded by grade:
///
///   scalar     = x0*y0 + sum_{i in p} xi*yi - sum_{j in q} xj*yj
///   grade1[t]  = x0*yt + xt*y0
///   grade2[ab] = xa*yb - xb*ya          (a < b)
///
/// with * the element-wise product on R^m. Nilpotent self-products
/// contribute nothing to the scalar part.
ProductResult clifford_product(const CliffordElement& x, const CliffordElement& y,
                               const Signature& sig);

/// Block-wise dot product over all 1+p+q+r blocks, degenerate blocks included.
double inner_product(const CliffordElement& x, const CliffordElement& y, const Signature& sig);

/// Squared norm over the non-degenerate blocks only: sum_{t=0}^{p+q} |block_t|^2.
/// Nilpotent blocks never contribute, so ||x||^2 != x.x whenever r > 0.
double norm_squared(const CliffordElement& x, const Signature& sig);

} // namespace decal
