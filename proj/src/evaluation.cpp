#include "mvgl/evaluation.hpp"

#include "mvgl/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mvgl::eval {

BinarizeRule BinarizeRule::density(double d, int n)
{
    if (!(d >= 0.0 && d <= 1.0)) throw InvalidConfig("target density must lie in [0, 1]");
    return top(static_cast<std::size_t>(std::floor(d * static_cast<double>(edge_count(n)))));
}

EdgeSet binarize(const EdgeVector& edges, const BinarizeRule& rule)
{
    const int n = edges.nodes();
    const Vector weights = -edges.values();
    std::vector<Edge> kept;
    if (weights.size() == 0) return EdgeSet(n);
    const EdgeIndexMap index(n);

    if (rule.kind == BinarizeRule::Kind::Relative) {
        const double max_weight = weights.maxCoeff();
        if (!(max_weight > 0.0)) return EdgeSet(n);
        const double cutoff = rule.relative * max_weight;
        for (Eigen::Index e = 0; e < weights.size(); ++e) {
            if (weights[e] > cutoff) kept.push_back(index.pair(e));
        }
        return EdgeSet(n, std::move(kept));
    }

    std::vector<Eigen::Index> order;
    for (Eigen::Index e = 0; e < weights.size(); ++e) {
        if (weights[e] > 0.0) order.push_back(e);
    }
    if (order.empty()) throw EmptyGraph("top-K binarization of a graph without positive weights");
    const auto k = std::min(rule.top_k, order.size());
    // Ties broken by edge index for determinism.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          return weights[a] > weights[b] || (weights[a] == weights[b] && a < b);
                      });
    for (std::size_t i = 0; i < k; ++i) kept.push_back(index.pair(order[i]));
    return EdgeSet(n, std::move(kept));
}

double f1(const EdgeSet& predicted, const EdgeSet& truth)
{
    if (predicted.nodes() != truth.nodes()) throw DimensionMismatch("f1: node counts differ");
    std::size_t hits = 0;
    for (const auto& [i, j] : predicted.edges()) hits += truth.contains(i, j) ? 1 : 0;
    if (hits == 0) return 0.0;
    const double precision = static_cast<double>(hits) / static_cast<double>(predicted.size());
    const double recall = static_cast<double>(hits) / static_cast<double>(truth.size());
    return 2.0 * precision * recall / (precision + recall);
}

double pairwise_correlation(const std::vector<EdgeVector>& views, int* degenerate_pairs)
{
    if (views.size() < 2) throw InvalidData("pairwise_correlation needs at least two views");
    std::vector<Vector> centered;
    std::vector<double> norms;
    for (const auto& v : views) {
        if (v.size() != views.front().size()) throw DimensionMismatch("pairwise_correlation: length mismatch");
        const Vector w = -v.values();
        centered.emplace_back(w.array() - w.mean());
        norms.push_back(centered.back().norm());
    }
    int degenerate = 0;
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < views.size(); ++a) {
        for (std::size_t b = a + 1; b < views.size(); ++b, ++pairs) {
            if (norms[a] == 0.0 || norms[b] == 0.0) {
                ++degenerate;
                continue;
            }
            total += centered[a].dot(centered[b]) / (norms[a] * norms[b]);
        }
    }
    if (degenerate_pairs) *degenerate_pairs = degenerate;
    return total / static_cast<double>(pairs);
}

std::string Metrics::to_json(int indent) const
{
    nlohmann::ordered_json j;
    j["f1_view"] = f1_view;
    j["f1_consensus"] = f1_consensus ? nlohmann::ordered_json(*f1_consensus) : nlohmann::ordered_json(nullptr);
    j["per_view_f1"] = per_view_f1;
    j["mean_pairwise_corr"] = mean_pairwise_corr;
    return j.dump(indent);
}

Metrics evaluate(const std::vector<EdgeSet>& views, const std::optional<EdgeSet>& consensus,
                 const datagen::GroundTruth& truth, double mean_pairwise_corr)
{
    if (views.size() != truth.views.size()) throw DimensionMismatch("evaluate: view count differs from truth");
    Metrics out;
    for (std::size_t i = 0; i < views.size(); ++i) out.per_view_f1.push_back(f1(views[i], truth.views[i]));
    out.f1_view = out.per_view_f1.empty()
                      ? 0.0
                      : std::accumulate(out.per_view_f1.begin(), out.per_view_f1.end(), 0.0)
                            / static_cast<double>(out.per_view_f1.size());
    if (consensus) out.f1_consensus = f1(*consensus, truth.consensus);
    out.mean_pairwise_corr = mean_pairwise_corr;
    return out;
}

std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::Single: return "svgl";
    case Method::MvglL1: return "mvgl_l1";
    case Method::MvglL2: return "mvgl_l2";
    case Method::MvglL2Unregularized: return "mvgl_l2_noreg";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    if (name == "single" || name == "svgl") return Method::Single;
    if (name == "l1" || name == "mvgl_l1") return Method::MvglL1;
    if (name == "l2" || name == "mvgl_l2") return Method::MvglL2;
    if (name == "l2_noreg" || name == "mvgl_l2_noreg") return Method::MvglL2Unregularized;
    throw InvalidConfig("unknown model '" + std::string(name) + "' (expected l1, l2 or single)");
}

PenaltyModel penalty_for(Method m)
{
    switch (m) {
    case Method::MvglL2: return PenaltyModel::group(true);
    case Method::MvglL2Unregularized: return PenaltyModel::group(false);
    default: return PenaltyModel::fused();
    }
}

LearnResult learn(const std::vector<ViewDataset>& datasets, Method method, const Hyperparameters& hyper,
                  const SolverOptions& options)
{
    LearnResult out;
    if (method == Method::Single) {
        for (const auto& d : datasets) {
            auto s = solve_single(d, hyper.alpha, options, hyper.rho);
            out.views.push_back(std::move(s.edges));
            out.reports.push_back(std::move(s.report));
        }
        return out;
    }
    auto s = admm_solve(datasets, hyper, penalty_for(method), options);
    out.views = std::move(s.view_edges);
    out.consensus = std::move(s.consensus_edges);
    out.reports.push_back(std::move(s.report));
    return out;
}

Metrics score(const LearnResult& learned, const datagen::GroundTruth& truth, const BinarizeRule& rule)
{
    std::vector<EdgeSet> views;
    for (const auto& v : learned.views) views.push_back(binarize(v, rule));
    std::optional<EdgeSet> consensus;
    if (learned.consensus) consensus = binarize(*learned.consensus, rule);
    const double corr = learned.views.size() >= 2 ? pairwise_correlation(learned.views) : 1.0;
    return evaluate(views, consensus, truth, corr);
}

TuneResult tune_beta(const std::vector<ViewDataset>& datasets, Method method, const Hyperparameters& base,
                     const SolverOptions& options, const BetaSearch& search)
{
    if (datasets.size() < 2) throw InvalidConfig("tune_beta needs at least two views");
    if (!(search.log10_low < search.log10_high)) throw InvalidConfig("tune_beta: empty search range");
    TuneResult out;
    auto evaluate_at = [&](double log_beta) {
        Hyperparameters h = base;
        h.beta = std::pow(10.0, log_beta);
        const double corr = pairwise_correlation(learn(datasets, method, h, options).views);
        out.trace.push_back({h.beta, corr});
        return corr;
    };
    auto budget_left = [&]() { return static_cast<int>(out.trace.size()) < search.max_evaluations; };
    auto close_enough = [&](double corr) { return std::abs(corr - search.target) <= search.tolerance; };
    auto finish = [&]() {
        const auto best = std::min_element(out.trace.begin(), out.trace.end(), [&](const auto& a, const auto& b) {
            return std::abs(a.statistic - search.target) < std::abs(b.statistic - search.target);
        });
        out.value = best->value;
        out.achieved = best->statistic;
        out.attained = close_enough(best->statistic);
        out.beta = out.value;
        return out;
    };

    // Bracket [lo, hi] in log10(beta) with corr(lo) < target < corr(hi).
    double lo = 0.0;
    double hi = 0.0;
    double corr_lo = 0.0;
    double corr_hi = 0.0;
    if (search.initial_log10) {
        const double start = std::clamp(*search.initial_log10, search.log10_low, search.log10_high);
        const double corr = evaluate_at(start);
        if (close_enough(corr)) return finish();
        const bool go_up = corr < search.target;
        double inner = start;
        double inner_corr = corr;
        for (;;) {
            const double outer = go_up ? std::min(inner + 1.0, search.log10_high)
                                       : std::max(inner - 1.0, search.log10_low);
            if (outer == inner || !budget_left()) return finish();
            const double outer_corr = evaluate_at(outer);
            if (close_enough(outer_corr)) return finish();
            if ((outer_corr < inner_corr) == go_up) ++out.monotonicity_violations;
            if ((outer_corr > search.target) == go_up) {
                lo = go_up ? inner : outer;
                hi = go_up ? outer : inner;
                corr_lo = go_up ? inner_corr : outer_corr;
                corr_hi = go_up ? outer_corr : inner_corr;
                break;
            }
            inner = outer;
            inner_corr = outer_corr;
        }
    } else {
        lo = search.log10_low;
        hi = search.log10_high;
        corr_lo = evaluate_at(lo);
        if (close_enough(corr_lo)) return finish();
        corr_hi = evaluate_at(hi);
        if (close_enough(corr_hi)) return finish();
        if (corr_hi < corr_lo) ++out.monotonicity_violations;
        if (!(corr_lo < search.target && search.target < corr_hi)) return finish();
    }

    while (budget_left()) {
        const double mid = 0.5 * (lo + hi);
        const double corr = evaluate_at(mid);
        if (corr < corr_lo || corr > corr_hi) ++out.monotonicity_violations;
        if (close_enough(corr)) break;
        if (corr < search.target) {
            lo = mid;
            corr_lo = corr;
        } else {
            hi = mid;
            corr_hi = corr;
        }
    }
    return finish();
}

namespace {

void check_grid(const std::vector<double>& grid)
{
    if (grid.empty()) throw InvalidConfig("hyperparameter grid is empty");
}

// Argmax of the statistic; the first maximum wins on ties.
TuneResult argmax(std::vector<TunePoint> trace)
{
    TuneResult out;
    out.trace = std::move(trace);
    const auto best = std::max_element(out.trace.begin(), out.trace.end(),
                                       [](const auto& a, const auto& b) { return a.statistic < b.statistic; });
    out.value = best->value;
    out.achieved = best->statistic;
    out.attained = true;
    return out;
}

} // namespace

TuneResult grid_search_alpha(const std::vector<ViewDataset>& datasets, const datagen::GroundTruth& truth,
                             Method method, const Hyperparameters& base, const std::vector<double>& grid,
                             const SolverOptions& options)
{
    check_grid(grid);
    std::vector<TunePoint> trace;
    for (double alpha : grid) {
        Hyperparameters h = base;
        h.alpha = alpha;
        trace.push_back({alpha, score(learn(datasets, method, h, options), truth).f1_view});
    }
    return argmax(std::move(trace));
}

TuneResult grid_search_alpha_density(const std::vector<ViewDataset>& datasets, Method method,
                                     const Hyperparameters& base, const std::vector<double>& grid,
                                     double target_density, const SolverOptions& options)
{
    check_grid(grid);
    if (datasets.empty()) throw InvalidData("no datasets");
    const int n = datasets.front().nodes();
    const auto m = static_cast<double>(edge_count(n));
    const auto rule = BinarizeRule::density(target_density, n);

    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());

    TuneResult out;
    double best_gap = std::numeric_limits<double>::infinity();
    for (double alpha : sorted) {
        Hyperparameters h = base;
        h.alpha = alpha;
        const auto learned = learn(datasets, method, h, options);
        double support = 0.0;
        double topk = 0.0;
        for (const auto& v : learned.views) {
            support += static_cast<double>(binarize(v).size()) / m;
            topk += static_cast<double>(binarize(v, rule).size()) / m;
        }
        support /= static_cast<double>(learned.views.size());
        topk /= static_cast<double>(learned.views.size());
        out.trace.push_back({alpha, support});

        const double gap = std::abs(topk - target_density);
        if (gap < best_gap) {
            best_gap = gap;
            out.value = alpha;
            out.achieved = topk;
        }
        if (support >= target_density) {
            out.value = alpha;
            out.achieved = topk;
            out.attained = true;
            break;
        }
    }
    return out;
}

std::vector<double> log_grid(double low, double high, int points)
{
    if (points < 1 || !(low > 0.0) || !(high >= low)) throw InvalidConfig("invalid log grid");
    std::vector<double> out;
    const double a = std::log10(low);
    const double b = std::log10(high);
    for (int i = 0; i < points; ++i) {
        out.push_back(points == 1 ? low : std::pow(10.0, a + (b - a) * i / (points - 1)));
    }
    return out;
}

TuneResult grid_search_gamma(const std::vector<ViewDataset>& datasets, const datagen::GroundTruth& truth,
                             const Hyperparameters& base, const GammaSearch& search, const SolverOptions& options)
{
    check_grid(search.multipliers);
    const double scale = base.beta * std::sqrt(static_cast<double>(datasets.size()));

    struct Candidate {
        double gamma;
        double beta;
        double f1_view;
    };
    std::vector<Candidate> candidates;
    TuneResult out;
    double beta = base.beta;
    for (double multiplier : search.multipliers) {
        Hyperparameters h = base;
        h.gamma = multiplier * scale;
        h.beta = beta;
        if (search.retune && h.beta > 0.0) {
            BetaSearch bs = *search.retune;
            bs.initial_log10 = std::log10(h.beta);
            h.beta = tune_beta(datasets, Method::MvglL2, h, options, bs).value;
            // Larger gamma needs at least as much coupling; start the next
            // candidate from here.
            beta = h.beta;
        }
        const double f1_view = score(learn(datasets, Method::MvglL2, h, options), truth).f1_view;
        candidates.push_back({h.gamma, h.beta, f1_view});
        out.trace.push_back({h.gamma, f1_view});
    }

    const double best = std::max_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
                            return a.f1_view < b.f1_view;
                        })->f1_view;
    const Candidate* chosen = nullptr;
    for (const auto& c : candidates) {
        if (c.f1_view >= best - search.f1_slack && (!chosen || c.gamma > chosen->gamma)) chosen = &c;
    }
    out.value = chosen->gamma;
    out.achieved = chosen->f1_view;
    out.beta = chosen->beta;
    out.attained = true;
    return out;
}

} // namespace mvgl::eval
