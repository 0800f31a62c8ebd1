#pragma once

#include <string>
#include <vector>

#include "matchscore/market.hpp"

namespace matchscore {

enum class MergerType { merger, acquisition };

/// One row of a merger list: `id,seller,buyer,year,type`.
struct MergerRecord {
    int id = 0;
    std::string seller;
    std::string buyer;
    int year = 0;
    MergerType type = MergerType::merger;
};

/// One row of a firm-year panel: `firm,year,age_years,size_teu,country`.
struct FirmYearRecord {
    std::string firm;
    int year = 0;
    double age_years = 0.0;
    double size_teu = 0.0;
    std::string country;
};

std::vector<MergerRecord> read_mergers_csv(const std::string& path);
std::vector<FirmYearRecord> read_panel_csv(const std::string& path);
/// `country,capital,lat,lon`.
CoordsTable read_coords_csv(const std::string& path);

struct RegimeData {
    Market market;
    MatchList matches;
};

/// Assembles one regime's market from a merger list, a firm-year panel, and a
/// capital-coordinates table. Each merger row contributes one buyer node and
/// one seller node (a recurring firm name is a distinct participant per
/// event, with characteristics taken at that event's year), ordered by record
/// id; the observed matching pairs them off row by row.
///
/// Join rules: names match exactly after trimming and case-folding. A firm
/// absent in its merger year carries its last earlier observation forward. A
/// buyer with no panel history at or before the merger year but observed
/// later is a consolidation-type entrant: raw age and size 0 (the regime
/// minimum after normalization), country from its first observation.
///
/// When `regime` looks like "YYYY-YYYY", merger rows outside that year range
/// are ignored, so one combined merger list can serve all regimes.
RegimeData load_regime(const std::string& mergers_path, const std::string& panel_path,
                       const std::string& coords_path, const std::string& regime);

struct PanelDiagnostics {
    std::vector<std::string> violations;     // hard problems: negative age or size
    std::vector<std::string> gaps;           // missing years inside a firm's observed span
    std::vector<std::string> never_active;   // firms with zero capacity in every year
    std::vector<std::string> carry_forwards; // merger-year lookups served by an earlier year
    bool clean() const {
        return violations.empty() && gaps.empty() && never_active.empty() && carry_forwards.empty();
    }
};

/// Diagnostic sweep over a parsed panel; carry-forward notices are reported
/// when a merger list is supplied.
PanelDiagnostics validate_panel(const std::vector<FirmYearRecord>& panel,
                                const std::vector<MergerRecord>* mergers = nullptr);

/// Persists a market and its observed matching in the three CSV input
/// formats, so generated fixtures can be reloaded through load_regime.
/// Requires distinct firm names (synthetic markets satisfy this); raw values
/// are written with enough digits to round-trip exactly.
void write_fixture_csvs(const Market& market, const MatchList& matches,
                        const std::string& mergers_path, const std::string& panel_path,
                        const std::string& coords_path, int year = 2000);

} // namespace matchscore
