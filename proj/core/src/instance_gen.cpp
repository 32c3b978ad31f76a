#include "mvstream/instance_gen.hpp"

#include <algorithm>
#include <cmath>

#include "mvstream/environment.hpp"

namespace mvstream {

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

double pick(std::mt19937_64& rng, double lo, double hi) {
  return lo + uniform01(rng) * (hi - lo);
}

}  // namespace

RandomInstance random_small_instance(std::mt19937_64& rng, int max_views, int max_rates,
                                     double max_window_width) {
  const int num_cameras = pick(rng, 2, std::max(2, max_views));
  constexpr double kDeltas[] = {1.0, 0.5, 0.25, 0.2};
  const double delta = kDeltas[pick(rng, 0, 3)];
  ViewpointGrid grid(num_cameras, delta);

  std::map<int, std::vector<int>> per_view;
  int max_total = 0;
  for (int v = 1; v <= num_cameras; ++v) {
    if (num_cameras > 2 && uniform01(rng) < 0.2) continue;  // some views unavailable
    const int count = pick(rng, 1, std::max(1, max_rates));
    std::vector<int> rates;
    while (static_cast<int>(rates.size()) < count) {
      const int r = 100 * pick(rng, 1, 10);
      if (std::find(rates.begin(), rates.end(), r) == rates.end()) rates.push_back(r);
    }
    std::sort(rates.begin(), rates.end());
    max_total += rates.back();
    per_view[v] = std::move(rates);
  }
  if (per_view.empty()) per_view[1] = {100};

  RandomInstance inst{
      Catalog(grid, std::move(per_view)), VideoProfile{}, NavigationWindow{}, 0.0};

  inst.profile.name = "random";
  inst.profile.independent.a = pick(rng, 0.9, 1.0);
  inst.profile.independent.e = pick(rng, 100.0, 1200.0);
  // Keep D(r) inside [0, 1] down to the smallest ladder rate.
  const double b_cap = inst.profile.independent.a * (100.0 + inst.profile.independent.e);
  inst.profile.independent.b = pick(rng, 50.0, 0.9 * b_cap);
  inst.profile.xi = pick(rng, 0.3, 1.4);
  inst.profile.inpaint_distortion = pick(rng, 0.2, 0.5);

  const int width_steps =
      pick(rng, 0, std::min(grid.max_index(),
                            static_cast<int>(max_window_width * grid.steps_per_view())));
  const int left = pick(rng, 0, grid.max_index() - width_steps);
  inst.window = {left, left + width_steps};

  inst.budget_kbps = pick(rng, 100.0, static_cast<double>(max_total) + 500.0);
  return inst;
}

}  // namespace mvstream
