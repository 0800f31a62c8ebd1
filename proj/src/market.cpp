#include "matchscore/market.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "matchscore/errors.hpp"

namespace matchscore {

std::vector<double> normalize_vector(const std::vector<double>& raw) {
    if (raw.empty()) throw ValidationError("normalize_vector: empty input");
    double lo = raw.front(), hi = raw.front();
    for (double x : raw) {
        if (!std::isfinite(x)) throw ValidationError("normalize_vector: non-finite input");
        if (x < 0.0) throw ValidationError("normalize_vector: negative input");
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    std::vector<double> out(raw.size());
    if (hi == lo) {
        // all-equal raw values: everything is the maximum, which maps to 1
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < raw.size(); ++i)
        out[i] = kNormMin + (1.0 - kNormMin) * ((raw[i] - lo) / span);
    return out;
}

double pair_distance(const Firm& b, const Firm& s) {
    if (b.country == s.country) return 0.0;
    if (!b.capital || !s.capital)
        throw ValidationError("pair_distance: missing capital coordinates for cross-country pair " +
                              b.name + " / " + s.name);
    const double dlat = b.capital->lat - s.capital->lat;
    const double dlon = b.capital->lon - s.capital->lon;
    return std::sqrt(dlat * dlat + dlon * dlon);
}

namespace {

void check_firm(const Firm& f) {
    if (!(f.age_raw >= 0.0) || !std::isfinite(f.age_raw))
        throw ValidationError("firm " + f.name + ": age must be finite and non-negative");
    if (!(f.size_raw >= 0.0) || !std::isfinite(f.size_raw))
        throw ValidationError("firm " + f.name + ": size must be finite and non-negative");
    if (f.capital) {
        if (f.capital->lat < -90.0 || f.capital->lat > 90.0 ||
            f.capital->lon < -180.0 || f.capital->lon > 180.0)
            throw ValidationError("firm " + f.name + ": capital coordinates out of range");
    }
}

void resolve_capital(Firm& f, const CoordsTable& coords) {
    auto it = coords.find(f.country);
    if (it == coords.end())
        throw ValidationError("unresolvable country code '" + f.country + "' for firm " + f.name);
    f.capital = it->second;
}

} // namespace

Market build_market(std::vector<Firm> buyers, std::vector<Firm> sellers,
                    const CoordsTable& coords, const std::string& regime) {
    if (buyers.empty() || buyers.size() != sellers.size())
        throw ValidationError("build_market: buyer and seller lists must be non-empty and equal-sized");
    for (auto& f : buyers) {
        f.side = Side::buyer;
        resolve_capital(f, coords);
        check_firm(f);
    }
    for (auto& f : sellers) {
        f.side = Side::seller;
        resolve_capital(f, coords);
        check_firm(f);
    }

    const int n = static_cast<int>(buyers.size());
    Market m;
    m.regime = regime;
    m.buyers = std::move(buyers);
    m.sellers = std::move(sellers);

    // Pooled normalization: buyers and sellers share one scale per regime.
    std::vector<double> age_pool, size_pool;
    age_pool.reserve(2 * n);
    size_pool.reserve(2 * n);
    for (const auto& f : m.buyers) { age_pool.push_back(f.age_raw); size_pool.push_back(f.size_raw); }
    for (const auto& f : m.sellers) { age_pool.push_back(f.age_raw); size_pool.push_back(f.size_raw); }
    const auto age_norm = normalize_vector(age_pool);
    const auto size_norm = normalize_vector(size_pool);
    m.age_b.assign(age_norm.begin(), age_norm.begin() + n);
    m.age_s.assign(age_norm.begin() + n, age_norm.end());
    m.size_b.assign(size_norm.begin(), size_norm.begin() + n);
    m.size_s.assign(size_norm.begin() + n, size_norm.end());

    std::vector<double> raw_dist(static_cast<std::size_t>(n) * n);
    for (int b = 0; b < n; ++b)
        for (int s = 0; s < n; ++s)
            raw_dist[static_cast<std::size_t>(b) * n + s] = pair_distance(m.buyers[b], m.sellers[s]);
    const auto dist_norm = normalize_vector(raw_dist);
    m.distance = Matrix(n, n);
    m.distance.flat() = dist_norm;

    m.validate();
    return m;
}

void Market::validate() const {
    if (buyers.empty() || buyers.size() != sellers.size())
        throw ValidationError("market: buyer and seller lists must be non-empty and equal-sized");
    const int n = size();
    auto check_norm = [](const std::vector<double>& v, int n, const char* what) {
        if (static_cast<int>(v.size()) != n)
            throw ValidationError(std::string("market: wrong length for ") + what);
        for (double x : v)
            if (!(x >= kNormMin && x <= 1.0))
                throw ValidationError(std::string("market: ") + what + " entry outside [1e-6, 1]");
    };
    check_norm(age_b, n, "age_b");
    check_norm(age_s, n, "age_s");
    check_norm(size_b, n, "size_b");
    check_norm(size_s, n, "size_s");
    if (distance.rows() != n || distance.cols() != n)
        throw ValidationError("market: distance matrix has wrong shape");

    bool any_cross = false;
    for (int b = 0; b < n; ++b)
        for (int s = 0; s < n; ++s)
            if (buyers[b].country != sellers[s].country) any_cross = true;
    for (int b = 0; b < n; ++b) {
        for (int s = 0; s < n; ++s) {
            const double d = distance.at(b, s);
            if (!(d >= kNormMin && d <= 1.0))
                throw ValidationError("market: distance entry outside [1e-6, 1]");
            if (any_cross && buyers[b].country == sellers[s].country && d != kNormMin) {
                std::ostringstream os;
                os << "market: same-country pair (" << b << ", " << s
                   << ") should have distance 1e-6, got " << d;
                throw ValidationError(os.str());
            }
        }
    }
}

void MatchList::validate(int n) const {
    std::set<int> bs, ss;
    for (const auto& [b, s] : pairs) {
        if (b < 0 || b >= n || s < 0 || s >= n)
            throw ValidationError("match list: index out of range");
        if (!bs.insert(b).second)
            throw ValidationError("match list: buyer " + std::to_string(b) + " appears twice");
        if (!ss.insert(s).second)
            throw ValidationError("match list: seller " + std::to_string(s) + " appears twice");
    }
}

} // namespace matchscore
