#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace dsep {

using Complex = std::complex<double>;

/// RMS phasor of a voltage or current. Cosine reference: a phasor X maps to
/// x(t) = sqrt(2) * |X| * cos(w t + arg X).
struct Phasor {
    double re = 0.0;
    double im = 0.0;

    constexpr Phasor() = default;
    constexpr Phasor(double real, double imag) : re(real), im(imag) {}
    explicit Phasor(Complex c) : re(c.real()), im(c.imag()) {}

    static Phasor from_polar(double magnitude, double angle_rad) {
        return Phasor(std::polar(magnitude, angle_rad));
    }

    Complex complex() const { return {re, im}; }
    double magnitude() const { return std::hypot(re, im); }
    double angle() const { return std::atan2(im, re); }
    bool finite() const { return std::isfinite(re) && std::isfinite(im); }

    bool operator==(const Phasor&) const = default;
};

using PhasorTriple = std::array<Phasor, 3>;

inline std::array<Complex, 3> to_complex(const PhasorTriple& p) {
    return {p[0].complex(), p[1].complex(), p[2].complex()};
}

inline PhasorTriple to_phasors(const std::array<Complex, 3>& c) {
    return {Phasor(c[0]), Phasor(c[1]), Phasor(c[2])};
}

}  // namespace dsep
