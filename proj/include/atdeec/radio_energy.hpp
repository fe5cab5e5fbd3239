#pragma once

#include <cmath>
#include <stdexcept>

namespace atdeec {

// First-order radio dissipation model. All energies are in joules, distances
// in meters, message sizes in bits. The amplifier stage switches from the
// d^2 law to the d^4 law at the crossover distance d0 = sqrt(eps_fs/eps_mp).
struct RadioParams {
    double e_elec;   // electronics energy, J/bit, spent on both TX and RX
    double e_da;     // data aggregation energy, J/bit/signal
    double eps_fs;   // short-range amplifier coefficient, J/bit/m^2
    double eps_mp;   // long-range amplifier coefficient, J/bit/m^4

    void validate() const {
        if (!(e_elec > 0.0) || !(e_da > 0.0) || !(eps_fs > 0.0) || !(eps_mp > 0.0))
            throw std::invalid_argument("radio parameters must be strictly positive");
        if (!std::isfinite(eps_fs / eps_mp))
            throw std::invalid_argument("eps_fs/eps_mp must be finite");
    }
};

// Stock parameter set: E_elec = 50 nJ/bit, E_DA = 5 pJ/bit/signal,
// eps_fs = 10 pJ/bit/m^2, eps_mp = 0.0013 pJ/bit/m^4.
inline constexpr RadioParams kDefaultRadio{50e-9, 5e-12, 10e-12, 0.0013e-12};

// Amplifier crossover distance, always derived from the coefficients.
inline double crossover_distance(const RadioParams& p) {
    p.validate();
    return std::sqrt(p.eps_fs / p.eps_mp);
}

// Energy to transmit `bits` over `distance_m`.
inline double transmit_energy(const RadioParams& p, double bits, double distance_m) {
    p.validate();
    if (bits < 0.0) throw std::invalid_argument("message length must be non-negative");
    if (distance_m < 0.0) throw std::invalid_argument("distance must be non-negative");
    const double d0 = std::sqrt(p.eps_fs / p.eps_mp);
    const double d2 = distance_m * distance_m;
    const double amp = (distance_m < d0) ? p.eps_fs * d2 : p.eps_mp * d2 * d2;
    return bits * (p.e_elec + amp);
}

// Energy to receive `bits`.
inline double receive_energy(const RadioParams& p, double bits) {
    p.validate();
    if (bits < 0.0) throw std::invalid_argument("message length must be non-negative");
    return bits * p.e_elec;
}

// Energy to aggregate `signals` messages of `bits` each into one.
inline double aggregation_energy(const RadioParams& p, double bits, int signals) {
    p.validate();
    if (bits < 0.0) throw std::invalid_argument("message length must be non-negative");
    if (signals < 0) throw std::invalid_argument("signal count must be non-negative");
    return bits * static_cast<double>(signals) * p.e_da;
}

}  // namespace atdeec
