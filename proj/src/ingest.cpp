#include "matchscore/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "matchscore/csv.hpp"
#include "matchscore/errors.hpp"

namespace matchscore {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::optional<std::pair<int, int>> parse_year_range(const std::string& regime) {
    int lo = 0, hi = 0;
    char extra = 0;
    if (std::sscanf(regime.c_str(), "%d-%d%c", &lo, &hi, &extra) == 2 && regime.size() == 9 &&
        lo <= hi)
        return std::make_pair(lo, hi);
    return std::nullopt;
}

/// Panel indexed by folded firm name, rows sorted by year.
using PanelIndex = std::map<std::string, std::vector<FirmYearRecord>>;

PanelIndex index_panel(const std::vector<FirmYearRecord>& panel) {
    PanelIndex idx;
    for (const auto& r : panel) idx[fold_name(r.firm)].push_back(r);
    for (auto& [name, rows] : idx)
        std::sort(rows.begin(), rows.end(),
                  [](const FirmYearRecord& a, const FirmYearRecord& b) { return a.year < b.year; });
    return idx;
}

/// Most recent observation at or before `year`, or nullptr.
const FirmYearRecord* lookup_carry_forward(const std::vector<FirmYearRecord>& rows, int year) {
    const FirmYearRecord* best = nullptr;
    for (const auto& r : rows) {
        if (r.year > year) break;
        best = &r;
    }
    return best;
}

} // namespace

std::vector<MergerRecord> read_mergers_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const int c_id = t.column("id"), c_seller = t.column("seller"), c_buyer = t.column("buyer"),
              c_year = t.column("year"), c_type = t.column("type");
    std::vector<MergerRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        MergerRecord r;
        r.id = parse_int_field(t, i, c_id);
        r.seller = t.field(i, c_seller);
        r.buyer = t.field(i, c_buyer);
        r.year = parse_int_field(t, i, c_year);
        const std::string type = fold_name(t.field(i, c_type));
        if (type == "merger") {
            r.type = MergerType::merger;
        } else if (type == "acquisition") {
            r.type = MergerType::acquisition;
        } else {
            throw ValidationError(path + " row " + std::to_string(i + 2) + ": unknown type '" +
                                  type + "' (expected merger or acquisition)");
        }
        if (fold_name(r.seller).empty() || fold_name(r.buyer).empty())
            throw ValidationError(path + " row " + std::to_string(i + 2) + ": empty firm name");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<FirmYearRecord> read_panel_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const int c_firm = t.column("firm"), c_year = t.column("year"), c_age = t.column("age_years"),
              c_size = t.column("size_teu"), c_country = t.column("country");
    std::vector<FirmYearRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        FirmYearRecord r;
        r.firm = t.field(i, c_firm);
        r.year = parse_int_field(t, i, c_year);
        r.age_years = parse_double_field(t, i, c_age);
        r.size_teu = parse_double_field(t, i, c_size);
        r.country = fold_name(t.field(i, c_country));
        out.push_back(std::move(r));
    }
    return out;
}

CoordsTable read_coords_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const int c_country = t.column("country"), c_lat = t.column("lat"), c_lon = t.column("lon");
    CoordsTable out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string key = fold_name(t.field(i, c_country));
        LatLon ll{parse_double_field(t, i, c_lat), parse_double_field(t, i, c_lon)};
        if (!out.emplace(key, ll).second)
            throw ValidationError(path + " row " + std::to_string(i + 2) +
                                  ": duplicate country '" + key + "'");
    }
    return out;
}

RegimeData load_regime(const std::string& mergers_path, const std::string& panel_path,
                       const std::string& coords_path, const std::string& regime) {
    std::vector<MergerRecord> mergers = read_mergers_csv(mergers_path);
    const PanelIndex panel = index_panel(read_panel_csv(panel_path));
    const CoordsTable coords = read_coords_csv(coords_path);

    if (const auto range = parse_year_range(regime)) {
        std::erase_if(mergers, [&](const MergerRecord& r) {
            return r.year < range->first || r.year > range->second;
        });
    }
    if (mergers.empty())
        throw ValidationError("no merger records for regime '" + regime + "' in " + mergers_path);
    std::sort(mergers.begin(), mergers.end(),
              [](const MergerRecord& a, const MergerRecord& b) { return a.id < b.id; });

    std::vector<std::string> offenders;
    std::set<int> ids;
    std::set<std::tuple<std::string, std::string, int>> rows_seen;
    for (const auto& r : mergers) {
        if (!ids.insert(r.id).second)
            offenders.push_back("duplicate merger id " + std::to_string(r.id));
        if (!rows_seen.insert({fold_name(r.seller), fold_name(r.buyer), r.year}).second)
            offenders.push_back("duplicate merger row (" + r.seller + ", " + r.buyer + ", " +
                                std::to_string(r.year) + ")");
    }

    std::vector<Firm> buyers, sellers;
    for (const auto& r : mergers) {
        // Seller: must be observed at or before the merger year (carry-forward).
        Firm seller;
        seller.id = regime + "/seller/" + std::to_string(r.id);
        seller.name = r.seller;
        seller.side = Side::seller;
        const auto sit = panel.find(fold_name(r.seller));
        const FirmYearRecord* srec = sit == panel.end() ? nullptr
                                                        : lookup_carry_forward(sit->second, r.year);
        if (!srec) {
            offenders.push_back("seller '" + r.seller + "' (merger id " + std::to_string(r.id) +
                                ") has no panel record at or before " + std::to_string(r.year));
        } else {
            seller.age_raw = srec->age_years;
            seller.size_raw = srec->size_teu;
            seller.country = srec->country;
        }
        sellers.push_back(std::move(seller));

        // Buyer: carry-forward, or consolidation-type entrant when the firm
        // only appears after the merger year.
        Firm buyer;
        buyer.id = regime + "/buyer/" + std::to_string(r.id);
        buyer.name = r.buyer;
        buyer.side = Side::buyer;
        const auto bit = panel.find(fold_name(r.buyer));
        const FirmYearRecord* brec = bit == panel.end() ? nullptr
                                                        : lookup_carry_forward(bit->second, r.year);
        if (brec) {
            buyer.age_raw = brec->age_years;
            buyer.size_raw = brec->size_teu;
            buyer.country = brec->country;
        } else if (bit != panel.end()) {
            buyer.age_raw = 0.0;
            buyer.size_raw = 0.0;
            buyer.country = bit->second.front().country;
        } else {
            offenders.push_back("buyer '" + r.buyer + "' (merger id " + std::to_string(r.id) +
                                ") is missing from the panel");
        }
        buyers.push_back(std::move(buyer));
    }

    for (const auto& f : buyers)
        if (!f.country.empty() && !coords.count(f.country))
            offenders.push_back("no capital coordinates for country '" + f.country + "' (buyer " +
                                f.name + ")");
    for (const auto& f : sellers)
        if (!f.country.empty() && !coords.count(f.country))
            offenders.push_back("no capital coordinates for country '" + f.country + "' (seller " +
                                f.name + ")");

    if (!offenders.empty()) {
        std::ostringstream os;
        os << "cannot assemble regime '" << regime << "':";
        for (const auto& o : offenders) os << "\n  - " << o;
        throw ValidationError(os.str());
    }

    RegimeData out;
    out.market = build_market(std::move(buyers), std::move(sellers), coords, regime);
    for (int i = 0; i < out.market.size(); ++i) out.matches.pairs.emplace_back(i, i);
    out.matches.validate(out.market.size());
    return out;
}

PanelDiagnostics validate_panel(const std::vector<FirmYearRecord>& panel,
                                const std::vector<MergerRecord>* mergers) {
    PanelDiagnostics d;
    const PanelIndex idx = index_panel(panel);
    for (const auto& [name, rows] : idx) {
        bool active = false;
        std::set<int> years;
        for (const auto& r : rows) {
            if (r.age_years < 0.0)
                d.violations.push_back("firm '" + r.firm + "' year " + std::to_string(r.year) +
                                       ": negative age");
            if (r.size_teu < 0.0)
                d.violations.push_back("firm '" + r.firm + "' year " + std::to_string(r.year) +
                                       ": negative TEU");
            if (r.size_teu > 0.0) active = true;
            if (!years.insert(r.year).second)
                d.violations.push_back("firm '" + r.firm + "' year " + std::to_string(r.year) +
                                       ": duplicate panel row");
        }
        for (int y = rows.front().year; y <= rows.back().year; ++y)
            if (!years.count(y)) {
                d.gaps.push_back("firm '" + rows.front().firm + "': no observation for year " +
                                 std::to_string(y));
            }
        if (!active) d.never_active.push_back("firm '" + rows.front().firm + "' has zero capacity throughout");
    }
    if (mergers) {
        auto note = [&](const std::string& name, int year) {
            const auto it = idx.find(fold_name(name));
            if (it == idx.end()) return;
            const FirmYearRecord* rec = lookup_carry_forward(it->second, year);
            if (rec && rec->year < year)
                d.carry_forwards.push_back("firm '" + name + "': merger year " +
                                           std::to_string(year) + " served by " +
                                           std::to_string(rec->year));
        };
        for (const auto& m : *mergers) {
            note(m.seller, m.year);
            note(m.buyer, m.year);
        }
    }
    return d;
}

void write_fixture_csvs(const Market& market, const MatchList& matches,
                        const std::string& mergers_path, const std::string& panel_path,
                        const std::string& coords_path, int year) {
    matches.validate(market.size());
    std::set<std::string> names;
    for (const auto& f : market.buyers) names.insert(fold_name(f.name));
    for (const auto& f : market.sellers) names.insert(fold_name(f.name));
    if (names.size() != 2 * static_cast<std::size_t>(market.size()))
        throw ValidationError("write_fixture_csvs: firm names must be distinct");

    std::vector<std::vector<std::string>> merger_rows;
    for (std::size_t i = 0; i < matches.pairs.size(); ++i) {
        const auto [b, s] = matches.pairs[i];
        merger_rows.push_back({std::to_string(i + 1), market.sellers[s].name,
                               market.buyers[b].name, std::to_string(year), "acquisition"});
    }
    write_csv(mergers_path, {"id", "seller", "buyer", "year", "type"}, merger_rows);

    std::vector<std::vector<std::string>> panel_rows;
    auto panel_row = [&](const Firm& f) {
        panel_rows.push_back({f.name, std::to_string(year), fmt_double(f.age_raw),
                              fmt_double(f.size_raw), f.country});
    };
    for (const auto& f : market.buyers) panel_row(f);
    for (const auto& f : market.sellers) panel_row(f);
    write_csv(panel_path, {"firm", "year", "age_years", "size_teu", "country"}, panel_rows);

    CoordsTable coords;
    for (const auto& f : market.buyers) coords[f.country] = *f.capital;
    for (const auto& f : market.sellers) coords[f.country] = *f.capital;
    std::vector<std::vector<std::string>> coord_rows;
    for (const auto& [country, ll] : coords)
        coord_rows.push_back({country, country + " capital", fmt_double(ll.lat), fmt_double(ll.lon)});
    write_csv(coords_path, {"country", "capital", "lat", "lon"}, coord_rows);
}

} // namespace matchscore
