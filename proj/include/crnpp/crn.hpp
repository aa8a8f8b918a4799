#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnpp/species.hpp"

namespace crnpp {

// Multiset of species; absent key means multiplicity 0.
class Multiset {
public:
    Multiset() = default;
    Multiset(std::initializer_list<std::pair<Species, int>> init) {
        for (const auto& [s, m] : init) add(s, m);
    }

    void add(const Species& s, int mult = 1) {
        if (mult <= 0) throw std::invalid_argument("multiplicity must be positive");
        counts_[s] += mult;
    }

    int count(const Species& s) const {
        auto it = counts_.find(s);
        return it == counts_.end() ? 0 : it->second;
    }

    bool contains(const Species& s) const { return counts_.count(s) > 0; }
    bool empty() const { return counts_.empty(); }
    std::size_t distinct() const { return counts_.size(); }

    void erase(const Species& s) { counts_.erase(s); }

    auto begin() const { return counts_.begin(); }
    auto end() const { return counts_.end(); }

    bool operator==(const Multiset&) const = default;

private:
    std::map<Species, int> counts_;
};

// Where a compiled reaction came from: source step/command, and the clock
// phase that gates it (kNoPhase for always-on reactions like the oscillator).
struct Provenance {
    static constexpr int kNoPhase = -1;

    int step = kNoPhase;
    int phase = kNoPhase;
    std::string command;

    bool operator==(const Provenance&) const = default;
};

struct Reaction {
    Multiset reactants;
    Multiset products;
    double rate = 1.0;
    Provenance origin;

    Reaction() = default;
    Reaction(Multiset r, Multiset p, double k) : reactants(std::move(r)), products(std::move(p)), rate(k) {
        if (!(rate > 0.0)) throw std::invalid_argument("reaction rate must be positive");
        if (reactants.empty() && products.empty())
            throw std::invalid_argument("reaction cannot have empty reactants and products");
    }

    bool operator==(const Reaction& o) const {
        return reactants == o.reactants && products == o.products && rate == o.rate;
    }
};

// Net molecule change of s when r fires once (products minus reactants).
inline int net_change(const Species& s, const Reaction& r) {
    return r.products.count(s) - r.reactants.count(s);
}

struct Crn {
    std::vector<Reaction> reactions;
    std::map<Species, double> initial;

    void set_initial(const Species& s, double value) {
        if (value < 0.0) throw std::invalid_argument("initial concentration must be nonnegative");
        initial[s] = value;
    }

    double initial_of(const Species& s) const {
        auto it = initial.find(s);
        return it == initial.end() ? 0.0 : it->second;
    }

    // Every species mentioned anywhere, in stable (namespace, name) order;
    // species with declared initials are included even if no reaction
    // touches them.
    std::vector<Species> all_species() const {
        std::map<Species, bool> seen;
        for (const auto& [s, _] : initial) seen[s] = true;
        for (const auto& r : reactions) {
            for (const auto& [s, _] : r.reactants) seen[s] = true;
            for (const auto& [s, _] : r.products) seen[s] = true;
        }
        std::vector<Species> out;
        out.reserve(seen.size());
        for (const auto& [s, _] : seen) out.push_back(s);
        return out;
    }
};

// Composes module CRNs into one network. Reactions are concatenated, never
// deduplicated: two commands emitting the same reaction must contribute
// twice the flux. Initial maps must agree on shared species.
inline Crn merge(const std::vector<Crn>& parts) {
    Crn out;
    for (const auto& part : parts) {
        for (const auto& r : part.reactions) out.reactions.push_back(r);
        for (const auto& [s, v] : part.initial) {
            auto it = out.initial.find(s);
            if (it != out.initial.end() && it->second != v)
                throw std::invalid_argument("conflicting initial concentrations for species '" +
                                            s.str() + "'");
            out.initial[s] = v;
        }
    }
    return out;
}

}  // namespace crnpp
