#include "decal/blade_oracle.hpp"

#include <bit>
#include <string>

namespace decal {

FullMultivector FullMultivector::zero(int n, int m) {
    FullMultivector mv;
    mv.n = n;
    mv.m = m;
    mv.coeffs.assign(std::size_t{1} << n, std::vector<double>(m, 0.0));
    return mv;
}

FullMultivector lift(const CliffordElement& x, const Signature& sig) {
    if (static_cast<int>(x.blocks.size()) != sig.blocks()) {
        throw ShapeMismatch("lift: element does not conform to signature");
    }
    FullMultivector mv = FullMultivector::zero(sig.generators(), sig.m());
    mv.coeffs[0] = x.blocks[0];
    for (int t = 1; t <= sig.generators(); ++t) {
        mv.coeffs[1u << (t - 1)] = x.blocks[t];
    }
    return mv;
}

int blade_reorder_sign(unsigned a, unsigned b) {
    // Counts pairs (i in a, j in b) with i > j: the transpositions needed to
    // interleave the two sorted generator lists into canonical order.
    int swaps = 0;
    for (unsigned rest = a >> 1; rest != 0; rest >>= 1) {
        swaps += std::popcount(rest & b);
    }
    return (swaps & 1) ? -1 : 1;
}

FullMultivector oracle_product(const FullMultivector& x, const FullMultivector& y,
                               const Signature& sig) {
    if (x.n != sig.generators() || y.n != sig.generators() || x.m != sig.m() || y.m != sig.m()) {
        throw ShapeMismatch("oracle_product: operands do not conform to signature");
    }
    if (sig.generators() > kOracleMaxGenerators) {
        throw OracleScaleExceeded("oracle_product supports at most " +
                                  std::to_string(kOracleMaxGenerators) + " generators, got " +
                                  std::to_string(sig.generators()));
    }

    const unsigned num_blades = 1u << sig.generators();
    FullMultivector out = FullMultivector::zero(sig.generators(), sig.m());

    for (unsigned a = 0; a < num_blades; ++a) {
        for (unsigned b = 0; b < num_blades; ++b) {
            int sign = blade_reorder_sign(a, b);
            // Repeated generators sit adjacent after the reorder and contract
            // through their squares.
            for (unsigned common = a & b; common != 0; common &= common - 1) {
                sign *= sig.square(std::countr_zero(common) + 1);
                if (sign == 0) break;
            }
            if (sign == 0) continue;
            auto& dst = out.coeffs[a ^ b];
            const auto& xa = x.coeffs[a];
            const auto& yb = y.coeffs[b];
            for (int c = 0; c < sig.m(); ++c) {
                dst[c] += sign * xa[c] * yb[c];
            }
        }
    }
    return out;
}

} // namespace decal
