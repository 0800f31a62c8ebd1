#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matchscore/matrix.hpp"

namespace matchscore {

/// Normalized characteristics live in [kNormMin, 1].
inline constexpr double kNormMin = 1e-6;

enum class Side { buyer, seller };

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

/// One market participant. A firm name may appear in several merger events;
/// each event contributes a distinct Firm node with characteristics taken at
/// that event's year, so ids are unique while names need not be.
struct Firm {
    std::string id;
    std::string name;
    Side side = Side::buyer;
    double age_raw = 0.0;  // years in the industry
    double size_raw = 0.0; // capacity in TEU
    std::string country;
    std::optional<LatLon> capital; // capital-city coordinates, degrees
};

/// Country code -> capital coordinates.
using CoordsTable = std::map<std::string, LatLon>;

/// One regime's matching market: equal-sized buyer and seller lists, their
/// characteristics normalized onto [1e-6, 1] on a pooled per-regime scale, and
/// the normalized buyer-seller distance matrix. Immutable by convention after
/// build_market.
struct Market {
    std::string regime;
    std::vector<Firm> buyers;
    std::vector<Firm> sellers;
    std::vector<double> age_b, age_s;   // normalized, pooled across both sides
    std::vector<double> size_b, size_s; // normalized, pooled across both sides
    Matrix distance;                    // normalized over all N*N pairs

    int size() const { return static_cast<int>(buyers.size()); }

    /// Throws ValidationError when any structural invariant is broken.
    void validate() const;
};

/// The observed one-to-one matching, as (buyer_index, seller_index) pairs.
struct MatchList {
    std::vector<std::pair<int, int>> pairs;

    int size() const { return static_cast<int>(pairs.size()); }

    /// One-to-one and index-range check against a market of n buyers/sellers.
    void validate(int n) const;
};

/// Affine map of a raw non-negative vector onto [1e-6, 1]: min -> 1e-6,
/// max -> 1. A degenerate all-equal vector maps to all ones.
std::vector<double> normalize_vector(const std::vector<double>& raw);

/// Raw (pre-normalization) distance between two firms: 0 when they share a
/// country, otherwise planar Euclidean distance in degrees between their
/// capital coordinates.
double pair_distance(const Firm& b, const Firm& s);

/// Assembles a Market: resolves capital coordinates by country, normalizes
/// age and size on a pooled buyer+seller scale, and normalizes the flattened
/// raw distance matrix (so same-country pairs land exactly on 1e-6 whenever a
/// cross-country pair exists).
Market build_market(std::vector<Firm> buyers, std::vector<Firm> sellers,
                    const CoordsTable& coords, const std::string& regime);

} // namespace matchscore
