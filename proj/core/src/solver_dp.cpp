#include "mvstream/solver_dp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace mvstream {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Flattened DP over states (view i, rate index ri, residual budget units c).
// The value of a state is the minimum total distortion of all window
// viewpoints strictly right of view i, given that (i, ri) is selected and c
// budget units remain for further views. Terminal states are views at or
// right of the window's right edge. Every window viewpoint is charged
// exactly once: interval viewpoints on the edge leading into the next view,
// the next view's own viewpoint (when inside the window) on that same edge,
// and the start view's viewpoint at answer assembly.
class DpSolver {
 public:
  DpSolver(const Catalog& catalog, const VideoProfile& profile, const NavigationWindow& window,
           double budget_kbps, DpStats* stats)
      : catalog_(catalog),
        profile_(profile),
        window_(window),
        grid_(catalog.grid()),
        stats_(stats),
        unit_(catalog.rate_gcd()) {
    // The spend can never exceed one maximal rate per view, so the budget
    // axis is capped there; anything larger behaves like an infinite budget.
    double max_spend = 0.0;
    for (int v : catalog.views()) {
      max_spend += catalog.max_rate(v) + catalog.depth_rate_overhead_kbps();
    }
    budget_units_ =
        static_cast<int>(std::floor(std::min(budget_kbps, max_spend) / unit_ + 1e-9));
    const auto& views = catalog_.views();
    num_views_ = static_cast<int>(views.size());
    rate_offset_.resize(num_views_ + 1, 0);
    for (int i = 0; i < num_views_; ++i) {
      cam_index_.push_back(grid_.camera_index(views[i]));
      rate_offset_[i + 1] = rate_offset_[i] + static_cast<int>(catalog_.rates(views[i]).size());
    }
    total_rates_ = rate_offset_[num_views_];
    edge_cache_.assign(static_cast<std::size_t>(total_rates_) * total_rates_,
                       std::numeric_limits<double>::quiet_NaN());
  }

  SolveResult run() {
    if (budget_units_ < 0) return infeasible();
    const int slots = budget_units_ + 1;
    value_.assign(static_cast<std::size_t>(total_rates_) * slots, kInf);
    choice_view_.assign(value_.size(), -2);  // -2 unreached, -1 terminal
    choice_rate_.assign(value_.size(), -1);
    suffix_count_.assign(value_.size(), 0);
    suffix_units_.assign(value_.size(), 0);

    for (int i = num_views_ - 1; i >= 0; --i) {
      const int nrates = rate_offset_[i + 1] - rate_offset_[i];
      for (int ri = 0; ri < nrates; ++ri) {
        for (int c = 0; c <= budget_units_; ++c) {
          fill_state(i, ri, c);
        }
      }
    }
    if (stats_) stats_->states = value_.size();

    // Assemble the answer over admissible start views (at or left of U_L).
    double best_value = kInf;
    int best_i = -1, best_ri = -1;
    int best_count = 0, best_units = 0;
    for (int i = 0; i < num_views_ && cam_index_[i] <= window_.left_index; ++i) {
      const auto& rates = catalog_.rates(catalog_.views()[i]);
      for (int ri = 0; ri < static_cast<int>(rates.size()); ++ri) {
        const int cost = cost_units(i, ri);
        if (cost > budget_units_) continue;
        const std::size_t s = state(i, ri, budget_units_ - cost);
        if (value_[s] == kInf) continue;
        const double boundary =
            cam_index_[i] == window_.left_index
                ? coding_distortion(rates[ri], profile_.independent)
                : 0.0;
        const double v = boundary + value_[s];
        const int count = 1 + suffix_count_[s];
        const int units = cost + suffix_units_[s];
        if (better(v, count, units, chain_key(i, ri, budget_units_ - cost),
                   best_value, best_count, best_units,
                   best_i < 0 ? ChainKey{} : chain_key(best_i, best_ri,
                                                       budget_units_ - cost_units(best_i, best_ri)))) {
          best_value = v;
          best_i = i;
          best_ri = ri;
          best_count = count;
          best_units = units;
        }
      }
    }
    if (best_i < 0) return infeasible();

    std::vector<Representation> items;
    int i = best_i, ri = best_ri, c = budget_units_ - cost_units(best_i, best_ri);
    while (i >= 0) {
      items.push_back({catalog_.views()[i], catalog_.rates(catalog_.views()[i])[ri]});
      const std::size_t s = state(i, ri, c);
      const int nj = choice_view_[s];
      const int nrj = choice_rate_[s];
      if (nj < 0) break;
      c -= cost_units(nj, nrj);
      i = nj;
      ri = nrj;
    }
    DownloadPlan plan = make_plan(std::move(items), catalog_.depth_rate_overhead_kbps());
    SolveResult result;
    result.distortion = navigation_distortion(plan, window_, profile_, grid_);
    result.plan = std::move(plan);
    return result;
  }

 private:
  struct ChainKey {
    const DpSolver* solver = nullptr;
    int i = -1, ri = -1, c = -1;
  };

  ChainKey chain_key(int i, int ri, int c) const { return {this, i, ri, c}; }

  SolveResult infeasible() const {
    SolveResult r;
    auto cheapest = cheapest_covering_cost(catalog_, window_);
    r.cheapest_covering_kbps = cheapest ? *cheapest : -1;
    return r;
  }

  std::size_t state(int i, int ri, int c) const {
    return (static_cast<std::size_t>(rate_offset_[i] + ri)) * (budget_units_ + 1) + c;
  }

  int cost_units(int i, int ri) const {
    return (catalog_.rates(catalog_.views()[i])[ri] + catalog_.depth_rate_overhead_kbps()) /
           unit_;
  }

  // Distortion charged on the edge (i, ri) -> (j, rj): the synthesized
  // viewpoints strictly between the two views (clipped to the window) plus
  // view j's own decode when it lands inside the window. Independent of the
  // residual budget, so cached across the budget axis.
  double edge_cost(int i, int ri, int j, int rj) {
    const std::size_t key = static_cast<std::size_t>(rate_offset_[i] + ri) * total_rates_ +
                            rate_offset_[j] + rj;
    double cached = edge_cache_[key];
    if (!std::isnan(cached)) return cached;
    if (stats_) ++stats_->edge_sums;
    const Representation left{catalog_.views()[i], catalog_.rates(catalog_.views()[i])[ri]};
    const Representation right{catalog_.views()[j], catalog_.rates(catalog_.views()[j])[rj]};
    double sum = 0.0;
    const int lo = std::max(window_.left_index, cam_index_[i] + 1);
    const int hi = std::min(window_.right_index, cam_index_[j] - 1);
    for (int idx = lo; idx <= hi; ++idx) {
      sum += synthesis_distortion(grid_.viewpoint(idx), left, right, profile_);
    }
    if (cam_index_[j] >= window_.left_index && cam_index_[j] <= window_.right_index) {
      sum += coding_distortion(right.rate_kbps, profile_.independent);
    }
    edge_cache_[key] = sum;
    return sum;
  }

  void fill_state(int i, int ri, int c) {
    const std::size_t s = state(i, ri, c);
    if (cam_index_[i] >= window_.right_index) {
      value_[s] = 0.0;
      choice_view_[s] = -1;
      suffix_count_[s] = 0;
      suffix_units_[s] = 0;
      return;
    }
    double best = kInf;
    int best_j = -2, best_rj = -1, best_count = 0, best_units = 0;
    for (int j = i + 1; j < num_views_; ++j) {
      const auto& rates = catalog_.rates(catalog_.views()[j]);
      for (int rj = 0; rj < static_cast<int>(rates.size()); ++rj) {
        const int cost = cost_units(j, rj);
        if (cost > c) continue;
        if (stats_) ++stats_->transitions;
        const std::size_t next = state(j, rj, c - cost);
        if (value_[next] == kInf) continue;
        const double v = edge_cost(i, ri, j, rj) + value_[next];
        const int count = 1 + suffix_count_[next];
        const int units = cost + suffix_units_[next];
        if (better(v, count, units, chain_key(j, rj, c - cost), best, best_count, best_units,
                   best_j < -1 ? ChainKey{} : chain_key(best_j, best_rj,
                                                        c - cost_units(best_j, best_rj)))) {
          best = v;
          best_j = j;
          best_rj = rj;
          best_count = count;
          best_units = units;
        }
      }
    }
    value_[s] = best;
    choice_view_[s] = best_j;
    choice_rate_[s] = best_rj;
    suffix_count_[s] = best == kInf ? 0 : best_count;
    suffix_units_[s] = best == kInf ? 0 : best_units;
  }

  // Tie order on equal distortion: fewer views, then lexicographically
  // smaller view chain, then fewer budget units.
  bool better(double v, int count, int units, const ChainKey& chain, double inc_v,
              int inc_count, int inc_units, const ChainKey& inc_chain) const {
    if (v < inc_v) return true;
    if (v > inc_v || v == kInf) return false;
    if (count != inc_count) return count < inc_count;
    const int lex = compare_chains(chain, inc_chain);
    if (lex != 0) return lex < 0;
    return units < inc_units;
  }

  // Walks two finalized choice chains and compares their view sequences.
  int compare_chains(const ChainKey& a, const ChainKey& b) const {
    if (a.solver == nullptr || b.solver == nullptr) return 0;
    int ai = a.i, ari = a.ri, ac = a.c;
    int bi = b.i, bri = b.ri, bc = b.c;
    while (ai >= 0 && bi >= 0) {
      if (ai != bi) return ai < bi ? -1 : 1;
      const std::size_t sa = state(ai, ari, ac);
      const std::size_t sb = state(bi, bri, bc);
      const int naj = choice_view_[sa], nbj = choice_view_[sb];
      if (naj < 0 || nbj < 0) {
        if (naj < 0 && nbj < 0) return 0;
        return naj < 0 ? -1 : 1;  // shorter chain first
      }
      const int narj = choice_rate_[sa], nbrj = choice_rate_[sb];
      ac -= cost_units(naj, narj);
      bc -= cost_units(nbj, nbrj);
      ai = naj;
      ari = narj;
      bi = nbj;
      bri = nbrj;
    }
    return 0;
  }

  const Catalog& catalog_;
  const VideoProfile& profile_;
  const NavigationWindow& window_;
  const ViewpointGrid& grid_;
  DpStats* stats_;
  int unit_;
  int budget_units_;
  int num_views_ = 0;
  int total_rates_ = 0;
  std::vector<int> cam_index_;
  std::vector<int> rate_offset_;
  std::vector<double> edge_cache_;
  std::vector<double> value_;
  std::vector<int> choice_view_;
  std::vector<int> choice_rate_;
  std::vector<int> suffix_count_;
  std::vector<int> suffix_units_;
};

}  // namespace

SolveResult solve_optimal(const Catalog& catalog, const VideoProfile& profile,
                          const NavigationWindow& window, double budget_kbps, DpStats* stats) {
  auto cheapest = cheapest_covering_cost(catalog, window);
  if (!cheapest) {
    SolveResult r;
    r.cheapest_covering_kbps = -1;
    return r;
  }
  if (static_cast<double>(*cheapest) > budget_kbps + 1e-9) {
    SolveResult r;
    r.cheapest_covering_kbps = *cheapest;
    return r;
  }
  DpSolver solver(catalog, profile, window, budget_kbps, stats);
  return solver.run();
}

std::vector<ProbeSample> complexity_probe(const std::vector<ProbeSize>& sizes, int repeats) {
  std::vector<ProbeSample> samples;
  for (const ProbeSize& size : sizes) {
    ViewpointGrid grid(size.num_views, 0.5);
    std::map<int, std::vector<int>> per_view;
    std::vector<int> rates;
    for (int k = 1; k <= size.num_rates; ++k) rates.push_back(100 * k);
    for (int v = 1; v <= size.num_views; ++v) per_view[v] = rates;
    Catalog catalog(grid, per_view);
    VideoProfile profile{"probe", {0.98, 282.17, 469.13}, std::nullopt, 0.35, 0.35};
    NavigationWindow window{0, grid.max_index()};
    // Budget tied to the view count only, so scaling the ladder leaves the
    // residual-budget axis unchanged.
    const double budget = size.num_views * 400.0;

    ProbeSample sample{size.num_views, size.num_rates, kInf, 0};
    for (int rep = 0; rep < std::max(repeats, 1); ++rep) {
      DpStats stats;
      const auto start = std::chrono::steady_clock::now();
      (void)solve_optimal(catalog, profile, window, budget, &stats);
      const auto stop = std::chrono::steady_clock::now();
      const double secs = std::chrono::duration<double>(stop - start).count();
      if (secs < sample.seconds) {
        sample.seconds = secs;
        sample.transitions = stats.transitions;
      }
    }
    samples.push_back(sample);
  }
  return samples;
}

}  // namespace mvstream
