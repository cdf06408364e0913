#include "nbmr/channel.hpp"

#include "nbmr/errors.hpp"
#include "nbmr/rng.hpp"

#include <cmath>

namespace nbmr {

std::vector<BitObservation> transmit_bec(std::span<const std::uint8_t> bits,
                                         double epsilon, std::mt19937_64& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw config_error("erasure probability must be in [0, 1]");
    std::vector<BitObservation> obs(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        obs[i].kind = ChannelKind::Bec;
        obs[i].erased = uniform_unit(rng) < epsilon;
        obs[i].y = obs[i].erased ? 0.0 : static_cast<double>(bits[i]);
    }
    return obs;
}

double awgn_sigma(double ebn0_db, double rate_bits) {
    if (!(rate_bits > 0.0 && rate_bits <= 1.0))
        throw config_error("bit rate must be in (0, 1]");
    return std::sqrt(1.0 / (2.0 * rate_bits * std::pow(10.0, ebn0_db / 10.0)));
}

std::vector<BitObservation> transmit_awgn(std::span<const std::uint8_t> bits,
                                          double ebn0_db, double rate_bits,
                                          std::mt19937_64& rng) {
    const double sigma = awgn_sigma(ebn0_db, rate_bits);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<BitObservation> obs(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        obs[i].kind = ChannelKind::Awgn;
        obs[i].sigma = sigma;
        obs[i].y = (bits[i] ? -1.0 : 1.0) + noise(rng);
    }
    return obs;
}

ProbVec symbol_posterior(const Field& field, std::span<const BitObservation> obs) {
    const int m = field.m();
    if (obs.size() != static_cast<std::size_t>(m))
        throw config_error("symbol posterior needs exactly m bit observations");
    for (std::size_t i = 1; i < obs.size(); ++i)
        if (obs[i].kind != obs[0].kind)
            throw config_error("mixed observation kinds within one symbol");

    const int q = field.q();
    ProbVec p(q);
    if (obs[0].kind == ChannelKind::Bec) {
        for (int x = 0; x < q; ++x) {
            double f = 1.0;
            for (int i = 0; i < m; ++i) {
                const BitObservation& o = obs[static_cast<std::size_t>(i)];
                const int bit = (x >> i) & 1;
                if (o.erased)
                    f *= 0.5;
                else if (bit != static_cast<int>(o.y))
                    f = 0.0;
            }
            p[x] = f;
        }
    } else {
        // log Pr(bit | y) up to a per-bit constant: -(y - s)^2 / (2 sigma^2)
        Eigen::ArrayXd ll0(m), ll1(m);
        for (int i = 0; i < m; ++i) {
            const BitObservation& o = obs[static_cast<std::size_t>(i)];
            const double inv2s2 = 1.0 / (2.0 * o.sigma * o.sigma);
            ll0[i] = -(o.y - 1.0) * (o.y - 1.0) * inv2s2;
            ll1[i] = -(o.y + 1.0) * (o.y + 1.0) * inv2s2;
        }
        for (int x = 0; x < q; ++x) {
            double s = 0.0;
            for (int i = 0; i < m; ++i)
                s += ((x >> i) & 1) ? ll1[i] : ll0[i];
            p[x] = s;
        }
        p -= p.maxCoeff();
        p = p.exp();
    }
    normalize(p);
    return p;
}

std::vector<std::uint8_t> symbols_to_bits(const Field& field,
                                          std::span<const symbol_t> symbols) {
    const int m = field.m();
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * static_cast<std::size_t>(m));
    for (symbol_t s : symbols)
        for (int i = 0; i < m; ++i)
            bits.push_back(static_cast<std::uint8_t>((s >> i) & 1));
    return bits;
}

} // namespace nbmr
