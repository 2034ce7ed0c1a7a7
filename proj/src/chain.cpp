#include "chaincorr/chain.hpp"

namespace chaincorr {

ChainConfig validate(const ChainConfig& cfg) {
    if (cfg.n_atoms < min_atoms || cfg.n_atoms > max_atoms) {
        throw unsupported_atom_count(
            "n_atoms = " + std::to_string(cfg.n_atoms) + " outside supported range [" +
            std::to_string(min_atoms) + ", " + std::to_string(max_atoms) + "]");
    }
    if (!(cfg.spacing_over_lambda > 0.0)) {
        throw invalid_spacing("spacing_over_lambda must be positive, got " +
                              std::to_string(cfg.spacing_over_lambda));
    }
    if (cfg.driven_atom < 1 || cfg.driven_atom > cfg.n_atoms) {
        throw invalid_driven_atom("driven_atom = " + std::to_string(cfg.driven_atom) +
                                  " out of range [1, " + std::to_string(cfg.n_atoms) + "]");
    }
    if (!(cfg.rabi_over_gamma >= 0.0)) {
        throw invalid_rabi("rabi_over_gamma must be non-negative, got " +
                           std::to_string(cfg.rabi_over_gamma));
    }
    return cfg;
}

double atom_position(const ChainConfig& cfg, int atom) {
    return (atom - 1) * cfg.spacing_over_lambda;
}

} // namespace chaincorr
