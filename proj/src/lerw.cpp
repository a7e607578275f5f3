#include "stochlab/lerw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stochlab/errors.hpp"

namespace stochlab {

int WalkNetwork::vertex(const std::string& name) const {
    const auto it = index.find(name);
    if (it == index.end()) throw ArgumentError("network: unknown vertex " + name);
    return it->second;
}

double WalkNetwork::max_row_sum() const {
    return Q.rows() == 0 ? 0.0 : Q.rowwise().sum().maxCoeff();
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

WalkNetwork parse_network(std::istream& in) {
    struct Edge {
        std::string u, v;
        double w;
    };
    std::vector<Edge> edges;
    std::vector<std::string> a_names, b_names;
    bool have_a = false, have_b = false;
    WalkNetwork net;
    auto add_vertex = [&](const std::string& s) {
        if (net.index.emplace(s, static_cast<int>(net.names.size())).second) net.names.push_back(s);
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "network line " + std::to_string(lineno);
        if (line.rfind("A:", 0) == 0 || line.rfind("B:", 0) == 0) {
            std::istringstream ss(line.substr(2));
            auto& dst = line[0] == 'A' ? a_names : b_names;
            (line[0] == 'A' ? have_a : have_b) = true;
            std::string tok;
            while (ss >> tok) dst.push_back(tok);
            continue;
        }
        std::istringstream ss(line);
        Edge e;
        std::string extra;
        if (!(ss >> e.u >> e.v >> e.w) || (ss >> extra)) throw ArgumentError(where + ": expected \"u v weight\"");
        if (!(e.w > 0.0) || !std::isfinite(e.w)) throw ArgumentError(where + ": weight must be positive");
        if (e.u == e.v) throw ArgumentError(where + ": self-loops are not allowed");
        add_vertex(e.u);
        add_vertex(e.v);
        edges.push_back(e);
    }
    if (!have_a || !have_b) throw ArgumentError("network: missing A: or B: line");
    for (const auto& s : a_names) add_vertex(s);
    for (const auto& s : b_names) add_vertex(s);
    const int n = static_cast<int>(net.names.size());
    net.Q = RealMatrix::Zero(n, n);
    for (const auto& e : edges) {
        const int i = net.index.at(e.u), j = net.index.at(e.v);
        if (net.Q(i, j) != 0.0) throw ArgumentError("network: repeated edge " + e.u + " " + e.v);
        net.Q(i, j) = e.w;
        net.Q(j, i) = e.w;
    }
    for (const auto& s : a_names) net.A.push_back(net.index.at(s));
    for (const auto& s : b_names) net.B.push_back(net.index.at(s));
    if (net.A.size() != net.B.size() || net.A.empty()) throw ArgumentError("network: A and B must have equal nonzero length");
    for (int a : net.A)
        if (std::find(net.B.begin(), net.B.end(), a) != net.B.end())
            throw ArgumentError("network: A and B must be disjoint");
    auto distinct = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!distinct(net.A) || !distinct(net.B)) throw ArgumentError("network: repeated boundary vertex");
    return net;
}

WalkNetwork parse_network_string(const std::string& text) {
    std::istringstream in(text);
    return parse_network(in);
}

WalkNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("network: cannot open " + path);
    return parse_network(in);
}

void check_convergent(const WalkNetwork& net) {
    const double q = net.max_row_sum();
    if (q < 1.0) return;
    // Q is symmetric, so the spectral radius is the largest |eigenvalue|
    const RealVector ev = hermitian_eigenvalues(net.Q);
    const double rho = std::max(std::fabs(ev(0)), std::fabs(ev(ev.size() - 1)));
    if (rho >= 1.0)
        throw DomainError("walk_matrix: spectral radius of the step matrix is " + std::to_string(rho) +
                          " (max row sum " + std::to_string(q) + "), must be below 1");
}

RealMatrix walk_matrix(const WalkNetwork& net) {
    check_convergent(net);
    const auto n = net.Q.rows();
    const RealMatrix rhs = RealMatrix::Identity(n, n);
    const RealMatrix g = solve(RealMatrix(rhs - net.Q), rhs);
    RealMatrix w(static_cast<Eigen::Index>(net.A.size()), static_cast<Eigen::Index>(net.B.size()));
    for (std::size_t i = 0; i < net.A.size(); ++i)
        for (std::size_t j = 0; j < net.B.size(); ++j)
            w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(net.A[i], net.B[j]);
    return w;
}

RealMatrix walk_matrix_truncated(const WalkNetwork& net, int L) {
    const auto n = net.Q.rows();
    RealMatrix power = RealMatrix::Identity(n, n), sum = power;
    for (int m = 1; m <= L; ++m) {
        power = power * net.Q;
        sum += power;
    }
    RealMatrix w(static_cast<Eigen::Index>(net.A.size()), static_cast<Eigen::Index>(net.B.size()));
    for (std::size_t i = 0; i < net.A.size(); ++i)
        for (std::size_t j = 0; j < net.B.size(); ++j)
            w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum(net.A[i], net.B[j]);
    return w;
}

double neumann_tail(const WalkNetwork& net, int L) {
    const double q = net.max_row_sum();
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(q, L + 1) / (1.0 - q);
}

bool is_walk(const WalkNetwork& net, const Walk& w) {
    if (w.empty()) return false;
    for (int v : w)
        if (v < 0 || v >= net.size()) return false;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (net.Q(w[i - 1], w[i]) == 0.0) return false;
    return true;
}

double walk_weight(const WalkNetwork& net, const Walk& w) {
    if (!is_walk(net, w)) throw ArgumentError("walk_weight: not a walk of the network");
    double p = 1.0;
    for (std::size_t i = 1; i < w.size(); ++i) p *= net.Q(w[i - 1], w[i]);
    return p;
}

Walk loop_erase(const Walk& w) {
    Walk out;
    for (int v : w) {
        const auto it = std::find(out.begin(), out.end(), v);
        if (it != out.end())
            out.erase(it + 1, out.end());
        else
            out.push_back(v);
    }
    return out;
}

double fomin_determinant(const WalkNetwork& net) { return determinant(walk_matrix(net)); }

namespace {

// Weight of all walks start -> end of length <= L avoiding `forbidden`, grouped by
// their loop erasure. The loop erasure of a walk extended by one step depends only
// on the erasure so far and the new vertex, so the sum runs over erasure states.
std::map<Walk, double> walks_by_erasure(const WalkNetwork& net, int start, int end, int L,
                                        const std::vector<char>& forbidden) {
    std::map<Walk, double> done;
    if (forbidden[start]) return done;
    std::map<Walk, double> layer{{Walk{start}, 1.0}};
    const int n = net.size();
    for (int m = 0;; ++m) {
        for (const auto& [path, w] : layer)
            if (path.back() == end) done[path] += w;
        if (m == L) break;
        std::map<Walk, double> next;
        for (const auto& [path, w] : layer) {
            const int u = path.back();
            for (int v = 0; v < n; ++v) {
                const double q = net.Q(u, v);
                if (q == 0.0 || forbidden[v]) continue;
                Walk p = path;
                const auto it = std::find(p.begin(), p.end(), v);
                if (it != p.end())
                    p.erase(it + 1, p.end());
                else
                    p.push_back(v);
                next[p] += w * q;
            }
        }
        layer.swap(next);
    }
    return done;
}

double total_avoiding(const WalkNetwork& net, int start, int end, int L, const std::vector<char>& forbidden) {
    if (forbidden[start]) return 0.0;
    const int n = net.size();
    RealVector cur = RealVector::Zero(n);
    cur(start) = 1.0;
    double total = start == end ? 1.0 : 0.0;
    for (int m = 1; m <= L; ++m) {
        RealVector nxt = net.Q.transpose() * cur;
        for (int v = 0; v < n; ++v)
            if (forbidden[v]) nxt(v) = 0.0;
        total += nxt(end);
        cur.swap(nxt);
    }
    return total;
}

double tuple_sum(const WalkNetwork& net, std::size_t i, int L, std::vector<char>& forbidden) {
    const std::size_t N = net.A.size();
    if (i + 1 == N) return total_avoiding(net, net.A[i], net.B[i], L, forbidden);
    double total = 0.0;
    for (const auto& [erased, w] : walks_by_erasure(net, net.A[i], net.B[i], L, forbidden)) {
        std::vector<char> f = forbidden;
        for (int v : erased) f[v] = 1;
        total += w * tuple_sum(net, i + 1, L, f);
    }
    return total;
}

}  // namespace

double fomin_tail_bound(const WalkNetwork& net, int L_max) {
    const double q = net.max_row_sum();
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    const double N = static_cast<double>(net.A.size());
    // some walk longer than L_max: N choices, each tail times full sums of the rest
    return N * neumann_tail(net, L_max) * std::pow(1.0 / (1.0 - q), N - 1.0);
}

int fomin_lmax_for(const WalkNetwork& net, double tolerance) {
    if (net.max_row_sum() >= 1.0) throw DomainError("fomin_lmax_for: needs max row sum below 1");
    int L = 0;
    while (fomin_tail_bound(net, L) > tolerance) ++L;
    return L;
}

BruteForceResult brute_force_fomin(const WalkNetwork& net, int L_max, double tolerance) {
    if (L_max < 0) throw ArgumentError("brute_force_fomin: L_max must be nonnegative");
    if (net.size() > 12) throw ArgumentError("brute_force_fomin: at most 12 vertices");
    const double bound = fomin_tail_bound(net, L_max);
    std::vector<char> forbidden(static_cast<std::size_t>(net.size()), 0);
    const double value = tuple_sum(net, 0, L_max, forbidden);
    return {value, bound, bound <= tolerance};
}

Walk sample_lerw(const WalkNetwork& net, int a, const std::vector<int>& targets, RngStream& rng, long max_steps) {
    const int n = net.size();
    if (a < 0 || a >= n) throw ArgumentError("sample_lerw: start vertex out of range");
    std::vector<char> stop(static_cast<std::size_t>(n), 0);
    for (int t : targets) stop.at(static_cast<std::size_t>(t)) = 1;
    Walk path{a};
    int u = a;
    for (long k = 0; k < max_steps && !stop[u]; ++k) {
        const double total = net.Q.row(u).sum();
        if (total == 0.0) throw DomainError("sample_lerw: isolated vertex " + net.names[u]);
        double r = rng.uniform() * total;
        int v = -1;
        for (int j = 0; j < n; ++j) {
            if (net.Q(u, j) == 0.0) continue;
            v = j;
            r -= net.Q(u, j);
            if (r < 0.0) break;
        }
        u = v;
        // erase as we go so the stored path stays short
        const auto it = std::find(path.begin(), path.end(), u);
        if (it != path.end())
            path.erase(it + 1, path.end());
        else
            path.push_back(u);
    }
    if (!stop[u]) throw NumericError("sample_lerw: step budget exhausted", static_cast<double>(max_steps));
    return path;
}

std::vector<double> hitting_distribution(const WalkNetwork& net, int a, const std::vector<int>& targets) {
    const int n = net.size();
    std::vector<char> stop(static_cast<std::size_t>(n), 0);
    for (int t : targets) stop.at(static_cast<std::size_t>(t)) = 1;
    // h = P h off the targets, h = indicator on them
    RealMatrix m = RealMatrix::Identity(n, n);
    RealMatrix rhs = RealMatrix::Zero(n, static_cast<Eigen::Index>(targets.size()));
    for (int u = 0; u < n; ++u) {
        if (stop[u]) continue;
        const double total = net.Q.row(u).sum();
        for (int v = 0; v < n; ++v) m(u, v) -= net.Q(u, v) / total;
    }
    for (std::size_t k = 0; k < targets.size(); ++k) rhs(targets[k], static_cast<Eigen::Index>(k)) = 1.0;
    const RealMatrix h = solve(m, rhs);
    std::vector<double> out;
    for (std::size_t k = 0; k < targets.size(); ++k) out.push_back(h(a, static_cast<Eigen::Index>(k)));
    return out;
}

}  // namespace stochlab
