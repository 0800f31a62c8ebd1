#pragma once

#include <string>
#include <utility>
#include <vector>

#include "matchscore/matrix.hpp"

namespace matchscore {

/// Joint production values f(b, s) for a square market, with a feasibility
/// mask. Prohibited pairs are excluded from the program entirely rather than
/// carrying a large negative sentinel, so "blocked" is exact. The unmatched
/// payoff is 0 for every agent.
struct ValueMatrix {
    Matrix values;
    BoolMatrix blocked;

    ValueMatrix() = default;
    explicit ValueMatrix(int n) : values(n, n, 0.0), blocked(n, n, 0) {}

    int size() const { return values.rows(); }
    bool is_blocked(int b, int s) const { return blocked.at(b, s) != 0; }
};

/// An equilibrium of the assignment game: the optimal matching plus one
/// vertex of the dual polytope. Seller duals are the equilibrium prices.
struct AssignmentResult {
    std::vector<std::pair<int, int>> matching; // sorted by buyer index
    std::vector<int> unmatched_buyers;
    std::vector<int> unmatched_sellers;
    double objective = 0.0;
    std::vector<double> buyer_duals;  // u_b >= 0, 0 for unmatched buyers
    std::vector<double> seller_duals; // p_s >= 0, 0 for unmatched sellers
};

/// Maximizes total matched value over one-to-one matchings where every agent
/// may stay unmatched at payoff 0. Each agent is given a dedicated zero-value
/// null partner, which turns the doubly-substochastic program into a square
/// assignment problem solved exactly by the Hungarian method; integrality of
/// the assignment polytope makes the LP optimum integral. Duals satisfying
/// feasibility and complementary slackness are recovered afterwards.
AssignmentResult solve_assignment(const ValueMatrix& vm);

/// Exhaustive oracle over all partial one-to-one matchings, N <= 8 only.
/// Ties are broken towards the lexicographically smallest matched pair list.
/// Duals are not produced.
AssignmentResult brute_force_assignment(const ValueMatrix& vm);

struct StabilityCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Certifies that a result is a pairwise-stable (equivalently, optimal)
/// outcome: dual feasibility u_b + p_s >= f(b,s) on unblocked pairs,
/// complementary slackness on matched pairs and unmatched agents,
/// non-negativity, and strong duality, all at absolute tolerance tol.
StabilityCheck verify_stability(const ValueMatrix& vm, const AssignmentResult& result,
                                double tol = 1e-9);

} // namespace matchscore
