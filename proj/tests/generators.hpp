#pragma once

#include <random>

#include "ghostgrover/objects.hpp"
#include "ghostgrover/photon_state.hpp"

namespace testgen {

// Random nonnegative lambda with a random fraction of exact zeros.
inline ghostgrover::SchmidtState random_state(std::mt19937_64& rng, std::size_t m) {
    std::uniform_real_distribution<double> amp(0.0, 1.0);
    std::bernoulli_distribution zero(0.2);
    ghostgrover::Image w(m, 0.0);
    for (double& v : w) v = zero(rng) ? 0.0 : amp(rng);
    w[rng() % w.size()] = 1.0;
    return ghostgrover::SchmidtState::normalized(std::move(w));
}

inline ghostgrover::OracleObject random_object(std::mt19937_64& rng, std::size_t m, double density = 0.3) {
    std::bernoulli_distribution mark(density);
    auto obj = ghostgrover::empty_object(m);
    for (auto& v : obj.marks) v = mark(rng) ? 1 : 0;
    return obj;
}

inline ghostgrover::OracleObject random_marks(std::mt19937_64& rng, std::size_t m, std::size_t count) {
    auto obj = ghostgrover::empty_object(m);
    std::size_t placed = 0;
    while (placed < count) {
        const auto j = rng() % obj.marks.size();
        if (!obj.marks[j]) {
            obj.marks[j] = 1;
            ++placed;
        }
    }
    return obj;
}

}  // namespace testgen
