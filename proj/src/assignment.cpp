#include "matchscore/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "matchscore/errors.hpp"

namespace matchscore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Minimum-cost perfect matching on a square cost matrix (Jonker-Volgenant
/// style shortest augmenting paths with potentials, O(n^3)). Entries may be
/// +inf (forbidden edge); the caller guarantees a finite perfect matching
/// exists. Returns row -> column.
std::vector<int> hungarian_min_cost(const Matrix& cost) {
    const int n = cost.rows();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match_col(n + 1, 0); // 1-based: column j -> row, 0 = free
    std::vector<int> way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match_col[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match_col[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (!(delta < kInf))
                throw SolverError("assignment: no finite augmenting path (internal)");
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match_col[j]] += delta;
                    v[j] -= delta;
                } else if (minv[j] < kInf) {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match_col[j0] != 0);
        do {
            const int j1 = way[j0];
            match_col[j0] = match_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (match_col[j] >= 1) row_to_col[match_col[j] - 1] = j - 1;
    return row_to_col;
}

/// Recovers one vertex of the dual polytope given the optimal matching: the
/// buyer-minimal duals. Treating seller prices as p_{s(b)} = f(b,s(b)) - u_b,
/// dual feasibility becomes a system of lower bounds and difference
/// constraints on the matched buyers' u, solved by Bellman-Ford relaxation
/// (no positive cycle exists when the matching is optimal).
void recover_duals(const ValueMatrix& vm, AssignmentResult& r) {
    const int n = vm.size();
    r.buyer_duals.assign(n, 0.0);
    r.seller_duals.assign(n, 0.0);

    std::vector<int> seller_of(n, -1);
    for (const auto& [b, s] : r.matching) seller_of[b] = s;
    std::vector<char> seller_matched(n, 0);
    for (const auto& [b, s] : r.matching) seller_matched[s] = 1;

    std::vector<int> matched_buyers;
    for (const auto& [b, s] : r.matching) matched_buyers.push_back(b);

    // Lower bounds: u_b >= 0 and u_b >= f(b, s~) for unmatched sellers s~.
    for (int b : matched_buyers) {
        double lb = 0.0;
        for (int s = 0; s < n; ++s)
            if (!seller_matched[s] && !vm.is_blocked(b, s))
                lb = std::max(lb, vm.values.at(b, s));
        r.buyer_duals[b] = lb;
    }

    // Difference constraints: u_b >= u_b' + f(b, s(b')) - f(b', s(b')).
    const int passes = static_cast<int>(matched_buyers.size()) + 1;
    for (int it = 0; it < passes; ++it) {
        bool changed = false;
        for (int bp : matched_buyers) {
            const int sp = seller_of[bp];
            const double base = r.buyer_duals[bp] - vm.values.at(bp, sp);
            for (int b : matched_buyers) {
                if (b == bp || vm.is_blocked(b, sp)) continue;
                const double bound = base + vm.values.at(b, sp);
                if (bound > r.buyer_duals[b]) {
                    r.buyer_duals[b] = bound;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }

    for (const auto& [b, s] : r.matching)
        r.seller_duals[s] = vm.values.at(b, s) - r.buyer_duals[b];
}

} // namespace

AssignmentResult solve_assignment(const ValueMatrix& vm) {
    const int n = vm.size();
    if (n < 1) throw ValidationError("solve_assignment: empty market");
    for (int b = 0; b < n; ++b)
        for (int s = 0; s < n; ++s)
            if (!vm.is_blocked(b, s) && !std::isfinite(vm.values.at(b, s)))
                throw ValidationError("solve_assignment: non-finite value at unblocked pair");

    // Augmented square problem: real agents plus one dedicated null partner
    // per agent. Null-null edges are free so a finite perfect matching always
    // exists; maximization becomes min-cost via negation.
    const int m = 2 * n;
    Matrix cost(m, m, kInf);
    for (int b = 0; b < n; ++b)
        for (int s = 0; s < n; ++s)
            if (!vm.is_blocked(b, s)) cost.at(b, s) = -vm.values.at(b, s);
    for (int b = 0; b < n; ++b) cost.at(b, n + b) = 0.0;       // buyer b unmatched
    for (int s = 0; s < n; ++s) cost.at(n + s, s) = 0.0;       // seller s unmatched
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost.at(n + i, n + j) = 0.0; // null-null filler

    const auto row_to_col = hungarian_min_cost(cost);

    AssignmentResult r;
    for (int b = 0; b < n; ++b) {
        const int c = row_to_col[b];
        if (c < n) {
            r.matching.emplace_back(b, c);
            r.objective += vm.values.at(b, c);
        } else {
            r.unmatched_buyers.push_back(b);
        }
    }
    std::vector<char> seller_matched(n, 0);
    for (const auto& [b, s] : r.matching) seller_matched[s] = 1;
    for (int s = 0; s < n; ++s)
        if (!seller_matched[s]) r.unmatched_sellers.push_back(s);

    recover_duals(vm, r);

    const auto check = verify_stability(vm, r);
    if (!check.ok)
        throw SolverError("solve_assignment: solution failed stability certification: " +
                          check.violations.front());
    return r;
}

AssignmentResult brute_force_assignment(const ValueMatrix& vm) {
    const int n = vm.size();
    if (n < 1) throw ValidationError("brute_force_assignment: empty market");
    if (n > 8) throw ValidationError("brute_force_assignment: N > 8 not supported");

    std::vector<std::pair<int, int>> current, best;
    double best_value = 0.0; // empty matching
    bool have_best = false;

    std::vector<char> seller_used(n, 0);
    auto consider = [&](double value) {
        if (!have_best || value > best_value ||
            (value == best_value && current < best)) {
            best = current;
            best_value = value;
            have_best = true;
        }
    };

    // Depth-first over buyers; each buyer is either unmatched or paired with
    // an available unblocked seller.
    auto recurse = [&](auto&& self, int b, double value) -> void {
        if (b == n) {
            consider(value);
            return;
        }
        self(self, b + 1, value); // buyer b unmatched
        for (int s = 0; s < n; ++s) {
            if (seller_used[s] || vm.is_blocked(b, s)) continue;
            seller_used[s] = 1;
            current.emplace_back(b, s);
            self(self, b + 1, value + vm.values.at(b, s));
            current.pop_back();
            seller_used[s] = 0;
        }
    };
    recurse(recurse, 0, 0.0);

    AssignmentResult r;
    r.matching = best;
    r.objective = best_value;
    std::vector<char> bm(n, 0), sm(n, 0);
    for (const auto& [b, s] : r.matching) { bm[b] = 1; sm[s] = 1; }
    for (int i = 0; i < n; ++i) {
        if (!bm[i]) r.unmatched_buyers.push_back(i);
        if (!sm[i]) r.unmatched_sellers.push_back(i);
    }
    return r;
}

StabilityCheck verify_stability(const ValueMatrix& vm, const AssignmentResult& r, double tol) {
    StabilityCheck out;
    auto fail = [&out](const std::string& msg) {
        out.ok = false;
        out.violations.push_back(msg);
    };
    const int n = vm.size();
    if (static_cast<int>(r.buyer_duals.size()) != n ||
        static_cast<int>(r.seller_duals.size()) != n) {
        fail("dual vectors have wrong length");
        return out;
    }

    std::vector<int> seller_of(n, -1), buyer_of(n, -1);
    double matched_value = 0.0;
    for (const auto& [b, s] : r.matching) {
        if (b < 0 || b >= n || s < 0 || s >= n) { fail("matched pair index out of range"); return out; }
        if (seller_of[b] != -1 || buyer_of[s] != -1) fail("matching is not one-to-one");
        seller_of[b] = s;
        buyer_of[s] = b;
        if (vm.is_blocked(b, s)) fail("blocked pair is matched");
        matched_value += vm.values.at(b, s);
    }

    std::ostringstream os;
    if (std::abs(matched_value - r.objective) > tol) {
        os.str("");
        os << "objective " << r.objective << " != sum of matched values " << matched_value;
        fail(os.str());
    }

    double dual_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (r.buyer_duals[i] < -tol) fail("negative buyer dual at " + std::to_string(i));
        if (r.seller_duals[i] < -tol) fail("negative seller dual at " + std::to_string(i));
        if (seller_of[i] == -1 && std::abs(r.buyer_duals[i]) > tol)
            fail("unmatched buyer " + std::to_string(i) + " has nonzero dual");
        if (buyer_of[i] == -1 && std::abs(r.seller_duals[i]) > tol)
            fail("unmatched seller " + std::to_string(i) + " has nonzero dual");
        dual_sum += r.buyer_duals[i] + r.seller_duals[i];
    }

    for (int b = 0; b < n; ++b) {
        for (int s = 0; s < n; ++s) {
            if (vm.is_blocked(b, s)) continue;
            const double slack = r.buyer_duals[b] + r.seller_duals[s] - vm.values.at(b, s);
            if (slack < -tol) {
                os.str("");
                os << "dual infeasible at pair (" << b << ", " << s << "): slack " << slack;
                fail(os.str());
            }
            if (seller_of[b] == s && std::abs(slack) > tol) {
                os.str("");
                os << "complementary slackness violated on matched pair (" << b << ", " << s
                   << "): slack " << slack;
                fail(os.str());
            }
        }
    }

    if (std::abs(dual_sum - r.objective) > tol) {
        os.str("");
        os << "strong duality violated: objective " << r.objective << " vs dual sum " << dual_sum;
        fail(os.str());
    }
    return out;
}

} // namespace matchscore
