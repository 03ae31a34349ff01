#pragma once

#include <optional>
#include <string>

namespace mevsim {

// Venue choice. Users pick from {Lit, Dark, None}; arbitrageurs from
// {Lit, Dark, Both}.
enum class Venue { Lit, Dark, Both, None };

inline const char* to_string(Venue v) {
    switch (v) {
        case Venue::Lit: return "Lit";
        case Venue::Dark: return "Dark";
        case Venue::Both: return "Both";
        case Venue::None: return "None";
    }
    return "?";
}

inline std::optional<Venue> venue_from_string(const std::string& s) {
    if (s == "Lit") return Venue::Lit;
    if (s == "Dark") return Venue::Dark;
    if (s == "Both") return Venue::Both;
    if (s == "None") return Venue::None;
    return std::nullopt;
}

inline bool has_lit(Venue v) { return v == Venue::Lit || v == Venue::Both; }
inline bool has_dark(Venue v) { return v == Venue::Dark || v == Venue::Both; }

}  // namespace mevsim
