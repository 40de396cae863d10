#include "decal/clifford.hpp"

#include <cstddef>
#include <string>

namespace decal {

namespace {

void check_shape(const CliffordElement& x, const Signature& sig, const char* who) {
    if (static_cast<int>(x.blocks.size()) != sig.blocks()) {
        throw ShapeMismatch(std::string(who) + ": expected " + std::to_string(sig.blocks()) +
                            " blocks, got " + std::to_string(x.blocks.size()));
    }
    for (const auto& b : x.blocks) {
        if (static_cast<int>(b.size()) != sig.m()) {
            throw ShapeMismatch(std::string(who) + ": expected block length " +
                                std::to_string(sig.m()) + ", got " + std::to_string(b.size()));
        }
    }
}

} // namespace

CliffordElement CliffordElement::zero(const Signature& sig) {
    CliffordElement e;
    e.blocks.assign(sig.blocks(), std::vector<double>(sig.m(), 0.0));
    return e;
}

CliffordElement CliffordElement::identity(const Signature& sig) {
    CliffordElement e = zero(sig);
    e.blocks[0].assign(sig.m(), 1.0);
    return e;
}

ProductResult clifford_product(const CliffordElement& x, const CliffordElement& y,
                               const Signature& sig) {
    check_shape(x, sig, "clifford_product lhs");
    check_shape(y, sig, "clifford_product rhs");

    const int n = sig.generators();
    const int m = sig.m();

    ProductResult out;
    out.scalar.assign(m, 0.0);
    out.grade1.assign(n, std::vector<double>(m, 0.0));

    for (int c = 0; c < m; ++c) {
        out.scalar[c] = x.blocks[0][c] * y.blocks[0][c];
    }
    for (int t = 1; t <= n; ++t) {
        const int sq = sig.square(t);
        if (sq != 0) {
            for (int c = 0; c < m; ++c) {
                out.scalar[c] += sq * x.blocks[t][c] * y.blocks[t][c];
            }
        }
        for (int c = 0; c < m; ++c) {
            out.grade1[t - 1][c] = x.blocks[0][c] * y.blocks[t][c] + x.blocks[t][c] * y.blocks[0][c];
        }
    }
    for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            std::vector<double> coeff(m);
            for (int c = 0; c < m; ++c) {
                coeff[c] = x.blocks[a][c] * y.blocks[b][c] - x.blocks[b][c] * y.blocks[a][c];
            }
            out.grade2.emplace(BasisPair{a, b}, std::move(coeff));
        }
    }
    return out;
}

double inner_product(const CliffordElement& x, const CliffordElement& y, const Signature& sig) {
    check_shape(x, sig, "inner_product lhs");
    check_shape(y, sig, "inner_product rhs");
    double acc = 0.0;
    for (int t = 0; t < sig.blocks(); ++t) {
        for (int c = 0; c < sig.m(); ++c) {
            acc += x.blocks[t][c] * y.blocks[t][c];
        }
    }
    return acc;
}

double norm_squared(const CliffordElement& x, const Signature& sig) {
    check_shape(x, sig, "norm_squared");
    double acc = 0.0;
    for (int t = 0; t <= sig.p() + sig.q(); ++t) {
        for (int c = 0; c < sig.m(); ++c) {
            acc += x.blocks[t][c] * x.blocks[t][c];
        }
    }
    return acc;
}

} // namespace decal
