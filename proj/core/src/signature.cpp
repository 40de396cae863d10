#include "decal/signature.hpp"

#include <stdexcept>

namespace decal {

int derive_m(int d, int p, int q, int r) {
    if (d < 1 || p < 0 || q < 0 || r < 0) {
        throw InvalidSignature("derive_m: need d >= 1 and p,q,r >= 0, got p=" + std::to_string(p) +
                               " q=" + std::to_string(q) + " r=" + std::to_string(r) +
                               " d=" + std::to_string(d));
    }
    const int m = d / (1 + p + q + r);
    if (m == 0) {
        throw InvalidSignature("signature (" + std::to_string(p) + "," + std::to_string(q) + "," +
                               std::to_string(r) + ") needs 1+p+q+r <= d, got d=" + std::to_string(d));
    }
    return m;
}

Signature::Signature(int p, int q, int r, int d)
    : p_(p), q_(q), r_(r), d_(d), m_(derive_m(d, p, q, r)) {}

int Signature::square(int t) const {
    if (t < 1 || t > generators()) {
        throw IdOutOfRange("generator index " + std::to_string(t) + " outside 1.." +
                           std::to_string(generators()));
    }
    if (t <= p_) return 1;
    if (t <= p_ + q_) return -1;
    return 0;
}

std::string Signature::str() const {
    return "Cl_{" + std::to_string(p_) + "," + std::to_string(q_) + "," + std::to_string(r_) +
           "}(R^" + std::to_string(m_) + ")";
}

} // namespace decal
