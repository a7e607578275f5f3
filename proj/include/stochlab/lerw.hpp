#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "stochlab/linalg.hpp"
#include "stochlab/rng.hpp"

namespace stochlab {

using Walk = std::vector<int>;  // vertex indices

// Undirected weighted network with boundary tuples A and B.
struct WalkNetwork {
    std::vector<std::string> names;
    std::map<std::string, int> index;
    RealMatrix Q;  // symmetric step weights
    std::vector<int> A, B;

    int vertex(const std::string& name) const;
    int size() const { return static_cast<int>(names.size()); }
    double max_row_sum() const;
};

// Text format: lines "u v weight", "A: a1 a2 ...", "B: b1 b2 ..."; '#' starts a comment.
WalkNetwork parse_network(std::istream& in);
WalkNetwork parse_network_string(const std::string& text);
WalkNetwork load_network(const std::string& path);

// Requires the Green's function to be finite: row sums below 1, or failing that a
// spectral radius below 1 by power iteration. Throws DomainError naming the bound.
void check_convergent(const WalkNetwork& net);

// (I - Q)^{-1} restricted to rows A, columns B
RealMatrix walk_matrix(const WalkNetwork& net);
// sum_{m <= L} Q^m restricted to rows A, columns B
RealMatrix walk_matrix_truncated(const WalkNetwork& net, int L);
// entrywise bound q^{L+1}/(1-q), q the max row sum
double neumann_tail(const WalkNetwork& net, int L);

double walk_weight(const WalkNetwork& net, const Walk& w);
bool is_walk(const WalkNetwork& net, const Walk& w);
// chronological loop erasure
Walk loop_erase(const Walk& w);

double fomin_determinant(const WalkNetwork& net);

struct BruteForceResult {
    double value;
    double tail_bound;
    bool conclusive;  // tail_bound <= tolerance
};

// Bound on the weight of tuples with some walk longer than L_max.
double fomin_tail_bound(const WalkNetwork& net, int L_max);
// Smallest L_max whose tail bound is <= tolerance.
int fomin_lmax_for(const WalkNetwork& net, double tolerance);

// Sum over tuples of walks a_i -> b_i of length <= L_max in which each walk avoids
// the loop-erased parts of the earlier ones.
BruteForceResult brute_force_fomin(const WalkNetwork& net, int L_max, double tolerance = 1e-8);

// Walk from a that steps to a neighbour with probability proportional to the edge
// weight, stopped on first entry into the target set, then loop-erased.
Walk sample_lerw(const WalkNetwork& net, int a, const std::vector<int>& targets, RngStream& rng,
                 long max_steps = 10'000'000);
// P_a(first target entered is t) for each t in targets
std::vector<double> hitting_distribution(const WalkNetwork& net, int a, const std::vector<int>& targets);

}  // namespace stochlab
