#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace crnpp {

// Species namespaces keep compiler-generated names from colliding with user
// program variables. Rendered names carry a reserved prefix per namespace;
// the validator rejects user identifiers that start with one of them.
enum class SpeciesNs : int { User = 0, Clock = 1, Flag = 2, Temp = 3 };

inline constexpr std::string_view kClockPrefix = "clk_";
inline constexpr std::string_view kFlagPrefix = "flag_";
inline constexpr std::string_view kTempPrefix = "tmp_";

struct Species {
    SpeciesNs ns = SpeciesNs::User;
    std::string name;

    Species() = default;
    Species(SpeciesNs n, std::string id) : ns(n), name(std::move(id)) {}

    static Species user(std::string id) { return {SpeciesNs::User, std::move(id)}; }
    static Species clock(std::string id) { return {SpeciesNs::Clock, std::move(id)}; }
    static Species flag(std::string id) { return {SpeciesNs::Flag, std::move(id)}; }
    static Species temp(std::string id) { return {SpeciesNs::Temp, std::move(id)}; }

    // Stable ordering: namespace first, then name. Fixes the species order in
    // ODE systems, trace columns and serialized CRNs.
    auto operator<=>(const Species&) const = default;

    std::string str() const {
        switch (ns) {
            case SpeciesNs::User: return name;
            case SpeciesNs::Clock: return std::string(kClockPrefix) + name;
            case SpeciesNs::Flag: return std::string(kFlagPrefix) + name;
            case SpeciesNs::Temp: return std::string(kTempPrefix) + name;
        }
        return name;
    }
};

inline bool has_reserved_prefix(std::string_view id) {
    return id.starts_with(kClockPrefix) || id.starts_with(kFlagPrefix) ||
           id.starts_with(kTempPrefix);
}

}  // namespace crnpp
