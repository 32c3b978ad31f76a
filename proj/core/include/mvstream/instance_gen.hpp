#pragma once

#include <random>

#include "mvstream/catalog.hpp"

namespace mvstream {

/// A self-contained solver input for randomized cross-checks.
struct RandomInstance {
  Catalog catalog;
  VideoProfile profile;
  NavigationWindow window;
  double budget_kbps = 0.0;
};

/// Draws a small instance: 2..max_views cameras on a random grid, per-view
/// ladders of up to max_rates round rates, a grid-aligned window no wider
/// than max_window_width view units, and a budget that straddles the
/// feasibility boundary. Profiles are sampled so the rate-distortion fit
/// stays inside [0, 1] on every ladder rate.
RandomInstance random_small_instance(std::mt19937_64& rng, int max_views = 4,
                                     int max_rates = 3, double max_window_width = 2.0);

}  // namespace mvstream
