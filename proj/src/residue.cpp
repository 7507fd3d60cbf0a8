#include "kq/residue.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace kq {

namespace {

std::int64_t canonical(std::int64_t value, std::int64_t q) {
    value %= q;
    return value < 0 ? value + q : value;
}

void require_same(Modulus a, Modulus b) {
    if (a != b)
        throw std::invalid_argument(
            "arithmetic between residues of different moduli (q=" +
            std::to_string(a.value()) + " vs q=" + std::to_string(b.value()) +
            ")");
}

}  // namespace

Modulus::Modulus(std::int64_t q) : q_(q) {
    if (q < 2) throw std::invalid_argument("modulus must be at least 2");
    if (q > kMaxModulus)
        throw std::invalid_argument("modulus exceeds the supported bound " +
                                    std::to_string(kMaxModulus) +
                                    " (its square must fit in int64)");
}

Residue::Residue(std::int64_t value, Modulus modulus)
    : value_(canonical(value, modulus.value())), modulus_(modulus) {}

Residue operator+(Residue a, Residue b) {
    require_same(a.modulus_, b.modulus_);
    return Residue(a.value_ + b.value_, a.modulus_);
}

Residue operator-(Residue a, Residue b) {
    require_same(a.modulus_, b.modulus_);
    return Residue(a.value_ - b.value_, a.modulus_);
}

Residue operator*(Residue a, Residue b) {
    require_same(a.modulus_, b.modulus_);
    return Residue(a.value_ * b.value_, a.modulus_);
}

Residue Residue::operator-() const { return Residue(-value_, modulus_); }

ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b) {
    if (a == INT64_MIN || b == INT64_MIN)
        throw std::invalid_argument("extended_gcd: |input| must fit in int64");
    // Invariants: s*a + t*b = r and u*a + v*b = w throughout.
    std::int64_t r = a, w = b;
    std::int64_t s = 1, t = 0, u = 0, v = 1;
    while (w != 0) {
        const std::int64_t quot = r / w;
        r -= quot * w;
        s -= quot * u;
        t -= quot * v;
        std::swap(r, w);
        std::swap(s, u);
        std::swap(t, v);
    }
    if (r < 0) {
        r = -r;
        s = -s;
        t = -t;
    }
    return {r, s, t};
}

bool is_unit(Residue a) {
    return std::gcd(a.value(), a.modulus().value()) == 1;
}

std::optional<Residue> unit_inverse(Residue a) {
    const auto e = extended_gcd(a.value(), a.modulus().value());
    if (e.g != 1) return std::nullopt;
    return Residue(e.s, a.modulus());
}

Residue annihilator(Residue a) {
    const std::int64_t q = a.modulus().value();
    return Residue(q / std::gcd(a.value(), q), a.modulus());
}

}  // namespace kq
