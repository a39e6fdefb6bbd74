#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "moran/band.hpp"
#include "moran/errors.hpp"
#include "moran/moran_spec.hpp"
#include "moran/root_find.hpp"
#include "moran/word.hpp"

namespace moran {

/// The band-truncated address tree: every node still above the fine scale is
/// expanded, so each admissible cut set is a SELECT/RECURSE labelling of it.
/// Built once per band and reused across exponent evaluations.
class TruncatedTree {
public:
    struct Node {
        double log_diam;
        std::int32_t first_child;  // -1 when not expanded
        std::int32_t n_children;
        bool select_ok;
    };

    TruncatedTree(const MoranSpec& spec, const AdmissibleBand& band, std::int64_t max_nodes)
        : spec_(&spec), band_(band), max_nodes_(max_nodes) {
        nodes_.push_back(Node{0.0, -1, 0, false});  // root is never a member
        build(0, 0, 0.0);
        if (!feasible_root_check())
            throw domain_error("no admissible cut set exists for this band (uncovered branch at " +
                               infeasible_witness_ + ")");
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    std::int64_t node_count() const { return static_cast<std::int64_t>(nodes_.size()); }

    /// F(s) = min over admissible cut sets of Σ |J_u|^s, in linear scale.
    /// Infinity marks an infeasible subtree.
    double min_sum(double s) const {
        values_.assign(nodes_.size(), 0.0);
        for (std::size_t i = nodes_.size(); i-- > 0;) {
            const Node& nd = nodes_[i];
            double best = std::numeric_limits<double>::infinity();
            if (nd.select_ok) best = std::exp(s * nd.log_diam);
            if (nd.first_child >= 0) {
                double sum = 0.0;
                for (std::int32_t c = 0; c < nd.n_children; ++c)
                    sum += values_[static_cast<std::size_t>(nd.first_child + c)];
                best = std::min(best, sum);
            }
            values_[i] = best;
        }
        return values_[0];
    }

private:
    void build(std::size_t idx, std::int64_t level, double log_diam) {
        if (!band_.recurse_allowed(log_diam)) return;
        RatioVector rv = spec_->level(level + 1);
        std::int64_t n = rv.count_or_throw(level + 1);
        if (static_cast<std::int64_t>(nodes_.size()) + n > max_nodes_)
            throw resource_error("cut-set DP node budget (" + std::to_string(max_nodes_) +
                                 ") exceeded at level " + std::to_string(level + 1) +
                                 "; narrow the band or use the homogeneous path");
        std::int32_t first = static_cast<std::int32_t>(nodes_.size());
        nodes_[idx].first_child = first;
        nodes_[idx].n_children = static_cast<std::int32_t>(n);
        for (std::int64_t j = 1; j <= n; ++j) {
            double child_diam = log_diam + rv.log_ratio(j);
            nodes_.push_back(Node{child_diam, -1, 0, band_.select_allowed(child_diam, log_diam)});
        }
        for (std::int64_t j = 0; j < n; ++j) {
            std::size_t child = static_cast<std::size_t>(first + j);
            build(child, level + 1, nodes_[child].log_diam);
        }
    }

    bool feasible_root_check() {
        // A subtree is feasible iff it can select or some full expansion is.
        std::vector<char> ok(nodes_.size(), 0);
        for (std::size_t i = nodes_.size(); i-- > 0;) {
            const Node& nd = nodes_[i];
            bool f = nd.select_ok;
            if (!f && nd.first_child >= 0) {
                f = true;
                for (std::int32_t c = 0; c < nd.n_children && f; ++c)
                    f = ok[static_cast<std::size_t>(nd.first_child + c)] != 0;
            }
            ok[i] = f ? 1 : 0;
        }
        if (ok[0]) return true;
        // Walk down to a dead branch for the witness.
        std::size_t i = 0;
        std::string path = "<root>";
        while (nodes_[i].first_child >= 0) {
            bool moved = false;
            for (std::int32_t c = 0; c < nodes_[i].n_children; ++c) {
                std::size_t child = static_cast<std::size_t>(nodes_[i].first_child + c);
                if (!ok[child]) {
                    path += (i == 0 ? std::string(" ") : std::string(".")) + std::to_string(c + 1);
                    i = child;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        infeasible_witness_ = path;
        return false;
    }

    const MoranSpec* spec_;
    AdmissibleBand band_;
    std::int64_t max_nodes_;
    std::vector<Node> nodes_;
    mutable std::vector<double> values_;
    std::string infeasible_witness_;
};

/// log F(s) where F(s) = min over admissible cut sets of Σ_{u in M} |J_u|^s.
inline double min_cutset_sum(const MoranSpec& spec, const AdmissibleBand& band, double s,
                             std::int64_t max_nodes = 5'000'000) {
    if (!(s >= 0.0 && s <= static_cast<double>(spec.ambient_dim())))
        throw domain_error("min_cutset_sum: exponent must lie in [0, d]");
    TruncatedTree tree(spec, band, max_nodes);
    return std::log(tree.min_sum(s));
}

/// s_{δ,θ} for general specs: the root of F(s) = 1. F is the lower envelope
/// of finitely many strictly decreasing cut-set sums, so its root equals the
/// minimum of the individual roots.
inline double s_delta_theta_general(const MoranSpec& spec, const AdmissibleBand& band,
                                    std::int64_t max_nodes = 5'000'000, double tol = 1e-12) {
    TruncatedTree tree(spec, band, max_nodes);
    const double d = static_cast<double>(spec.ambient_dim());
    return bisect_decreasing([&](double s) { return std::log(tree.min_sum(s)); },
                             RootBracket{0.0, d, tol, 200}, 0.0, d);
}

}  // namespace moran
