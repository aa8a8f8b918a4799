#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "crnpp/crn.hpp"

namespace crnpp {

// Deterministic mass-action semantics of a CRN:
//
//   d[S]/dt = sum over reactions of  k * netChange(S, rxn) * prod [R]^m(R)
//
// compiled into flat index/multiplicity tables for fast evaluation. Immutable
// after construction; evaluation is reentrant.
class OdeSystem {
public:
    explicit OdeSystem(const Crn& crn) : species_(crn.all_species()) {
        for (std::size_t i = 0; i < species_.size(); ++i) index_[species_[i]] = i;
        terms_.reserve(crn.reactions.size());
        for (const auto& r : crn.reactions) {
            ReactionTerm t;
            t.rate = r.rate;
            for (const auto& [s, m] : r.reactants) t.factors.push_back({index_.at(s), m});
            for (const auto& s : species_set(r)) {
                int delta = net_change(s, r);
                if (delta != 0) t.deltas.push_back({index_.at(s), delta});
            }
            terms_.push_back(std::move(t));
        }
    }

    std::size_t dim() const { return species_.size(); }
    const std::vector<Species>& species() const { return species_; }

    std::size_t index_of(const Species& s) const { return index_.at(s); }
    bool has(const Species& s) const { return index_.count(s) > 0; }

    std::size_t reaction_count() const { return terms_.size(); }

    // flux = k * prod [R]^m for one reaction at the given state
    double flux(std::size_t reaction, const double* y) const {
        const ReactionTerm& t = terms_[reaction];
        double f = t.rate;
        for (const auto& [idx, mult] : t.factors)
            for (int i = 0; i < mult; ++i) f *= y[idx];
        return f;
    }

    void deriv(const double* y, double* dydt) const {
        for (std::size_t i = 0; i < species_.size(); ++i) dydt[i] = 0.0;
        accumulate(y, dydt, nullptr);
    }

    // Same as deriv but restricted to a subset of reactions (used by the
    // ideal-clock backend to integrate one phase window at a time).
    void deriv_subset(const double* y, double* dydt, const std::vector<std::size_t>& active) const {
        for (std::size_t i = 0; i < species_.size(); ++i) dydt[i] = 0.0;
        for (std::size_t r : active) apply(r, y, dydt);
    }

private:
    struct ReactionTerm {
        double rate;
        std::vector<std::pair<std::size_t, int>> factors;  // (species index, multiplicity)
        std::vector<std::pair<std::size_t, int>> deltas;   // (species index, net change)
    };

    static std::vector<Species> species_set(const Reaction& r) {
        std::map<Species, bool> seen;
        for (const auto& [s, _] : r.reactants) seen[s] = true;
        for (const auto& [s, _] : r.products) seen[s] = true;
        std::vector<Species> out;
        for (const auto& [s, _] : seen) out.push_back(s);
        return out;
    }

    void apply(std::size_t r, const double* y, double* dydt) const {
        double f = flux(r, y);
        for (const auto& [idx, delta] : terms_[r].deltas) dydt[idx] += f * delta;
    }

    void accumulate(const double* y, double* dydt, const void*) const {
        for (std::size_t r = 0; r < terms_.size(); ++r) apply(r, y, dydt);
    }

    std::vector<Species> species_;
    std::map<Species, std::size_t> index_;
    std::vector<ReactionTerm> terms_;
};

inline OdeSystem mass_action_odes(const Crn& crn) { return OdeSystem(crn); }

}  // namespace crnpp
