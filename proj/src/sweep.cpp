#include "ptspec/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptspec/errors.hpp"
#include "ptspec/parallel.hpp"

namespace ptspec {

namespace {

bool is_real_class(const Eigenvalue& ev) {
  return ev.classification == Classification::Real;
}

// Greedy nearest-neighbor assignment of current roots to previous
// trajectory endpoints. Returns per-current index of the matched previous
// slot (-1 = new born), plus an ambiguity flag.
struct Matching {
  std::vector<int> prev_of_cur;
  bool ambiguous = false;
};

Matching match_step(const std::vector<cplx>& prev,
                    const std::vector<cplx>& cur, double radius) {
  Matching mt;
  mt.prev_of_cur.assign(cur.size(), -1);
  std::vector<bool> prev_used(prev.size(), false);
  struct Cand {
    double d;
    size_t ip, ic;
  };
  std::vector<Cand> cands;
  for (size_t ic = 0; ic < cur.size(); ++ic)
    for (size_t ip = 0; ip < prev.size(); ++ip)
      cands.push_back({std::abs(cur[ic] - prev[ip]), ip, ic});
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.d < b.d; });
  std::vector<bool> cur_used(cur.size(), false);
  for (const Cand& c : cands) {
    if (c.d > radius) break;
    if (prev_used[c.ip] || cur_used[c.ic]) continue;
    // Two previous endpoints nearly equidistant from one current root:
    // report the step as ambiguous instead of guessing.
    for (size_t ip = 0; ip < prev.size(); ++ip) {
      if (ip == c.ip || prev_used[ip]) continue;
      if (std::abs(cur[c.ic] - prev[ip]) < 1.25 * std::max(c.d, 1e-12) &&
          std::abs(cur[c.ic] - prev[ip]) < 0.05 * radius)
        mt.ambiguous = true;
    }
    prev_used[c.ip] = true;
    cur_used[c.ic] = true;
    mt.prev_of_cur[c.ic] = static_cast<int>(c.ip);
  }
  return mt;
}

}  // namespace

SweepResult sweep_coefficient(const PotentialSpec& spec, int coeff_index,
                              double range_lo, double range_hi, int steps,
                              int count, const SweepOptions& opts) {
  spec.validate();
  if (steps < 2) throw InvalidSpecError("sweep needs at least 2 steps");
  if (coeff_index < 1 || coeff_index > spec.m - 1)
    throw InvalidSpecError("sweep coefficient index out of range");

  SweepResult result;
  result.parameter_values.resize(static_cast<size_t>(steps));
  for (int s = 0; s < steps; ++s)
    result.parameter_values[static_cast<size_t>(s)] =
        range_lo + (range_hi - range_lo) * s / (steps - 1);

  std::vector<std::vector<Eigenvalue>> per_step(
      static_cast<size_t>(steps));

  auto solve_at = [&](int s, const std::vector<cplx>& seeds) {
    PotentialSpec ps = spec;
    ps.a[static_cast<size_t>(coeff_index - 1)] =
        result.parameter_values[static_cast<size_t>(s)];
    FindOptions fo;
    fo.seeds = seeds;
    fo.parallel = !opts.parallel;  // scan parallelism off when steps run wide
    fo.verify_radius = false;      // sweep accuracy rides on the residuals
    const FindReport rep = find_eigenvalues(ps, count, std::nullopt, opts.ray,
                                            fo);
    per_step[static_cast<size_t>(s)] = rep.eigenvalues;
  };

  if (opts.warm_start || !opts.parallel) {
    std::vector<cplx> seeds;
    for (int s = 0; s < steps; ++s) {
      solve_at(s, opts.warm_start ? seeds : std::vector<cplx>{});
      seeds.clear();
      for (const Eigenvalue& ev : per_step[static_cast<size_t>(s)])
        seeds.push_back(ev.lambda);
    }
  } else {
    parallel_for(steps, true, [&](int s) { solve_at(s, {}); });
  }

  // Trajectory continuation by nearest-neighbor matching.
  std::vector<int> traj_of_slot;  // active trajectory per previous root
  std::vector<cplx> prev_vals;
  for (int s = 0; s < steps; ++s) {
    const auto& evs = per_step[static_cast<size_t>(s)];
    std::vector<cplx> cur_vals;
    for (const Eigenvalue& ev : evs) cur_vals.push_back(ev.lambda);

    if (s == 0) {
      for (size_t i = 0; i < evs.size(); ++i) {
        Trajectory tr;
        tr.start_step = 0;
        tr.values.push_back(evs[i].lambda);
        tr.classes.push_back(evs[i].classification);
        result.trajectories.push_back(std::move(tr));
        traj_of_slot.push_back(static_cast<int>(i));
      }
      prev_vals = cur_vals;
      continue;
    }

    // Matching radius scales with the observed motion and grid spacing.
    double med_gap = std::numeric_limits<double>::max();
    for (size_t i = 0; i + 1 < prev_vals.size(); ++i)
      med_gap = std::min(med_gap,
                         std::abs(prev_vals[i + 1] - prev_vals[i]));
    const double radius =
        std::max(0.5, 0.45 * (med_gap == std::numeric_limits<double>::max()
                                  ? 1.0
                                  : med_gap));

    const Matching mt = match_step(prev_vals, cur_vals, radius);

    std::vector<int> new_traj_of_slot(cur_vals.size(), -1);
    for (size_t ic = 0; ic < cur_vals.size(); ++ic) {
      int traj;
      if (mt.prev_of_cur[ic] >= 0) {
        traj = traj_of_slot[static_cast<size_t>(mt.prev_of_cur[ic])];
      } else {
        Trajectory tr;
        tr.start_step = s;
        result.trajectories.push_back(std::move(tr));
        traj = static_cast<int>(result.trajectories.size()) - 1;
      }
      result.trajectories[static_cast<size_t>(traj)].values.push_back(
          cur_vals[ic]);
      result.trajectories[static_cast<size_t>(traj)].classes.push_back(
          evs[ic].classification);
      new_traj_of_slot[ic] = traj;
    }

    // Coalescence: two real trajectories left the real axis together --
    // either their matches turned into conjugate-pair members (fine grids)
    // or they ended while a pair was born nearby (coarse grids).
    std::vector<int> lost_real;
    std::vector<cplx> pair_members;
    const auto& prev_evs = per_step[static_cast<size_t>(s - 1)];
    for (size_t ip = 0; ip < prev_vals.size(); ++ip) {
      if (!is_real_class(prev_evs[ip])) continue;
      int continued_to = -1;
      for (size_t ic = 0; ic < cur_vals.size(); ++ic)
        if (mt.prev_of_cur[ic] == static_cast<int>(ip))
          continued_to = static_cast<int>(ic);
      if (continued_to < 0) {
        lost_real.push_back(static_cast<int>(ip));
      } else if (!is_real_class(evs[static_cast<size_t>(continued_to)])) {
        lost_real.push_back(static_cast<int>(ip));
        pair_members.push_back(cur_vals[static_cast<size_t>(continued_to)]);
      }
    }
    for (size_t ic = 0; ic < cur_vals.size(); ++ic)
      if (mt.prev_of_cur[ic] < 0 && !is_real_class(evs[ic]))
        pair_members.push_back(cur_vals[ic]);

    if (lost_real.size() == 2 && pair_members.size() >= 2) {
      const cplx mid = 0.5 * (prev_vals[static_cast<size_t>(lost_real[0])] +
                              prev_vals[static_cast<size_t>(lost_real[1])]);
      bool conj_pair_near_mid = false;
      for (size_t i = 0; i < pair_members.size(); ++i)
        for (size_t j = i + 1; j < pair_members.size(); ++j)
          if (std::abs(pair_members[i] - std::conj(pair_members[j])) <
                  1e-4 * std::max(1.0, std::abs(pair_members[i])) &&
              std::abs(pair_members[i].real() - mid.real()) < 2.0 * radius)
            conj_pair_near_mid = true;
      CoalescenceEvent ev;
      ev.param_lo = result.parameter_values[static_cast<size_t>(s - 1)];
      ev.param_hi = result.parameter_values[static_cast<size_t>(s)];
      ev.traj_a = traj_of_slot[static_cast<size_t>(lost_real[0])];
      ev.traj_b = traj_of_slot[static_cast<size_t>(lost_real[1])];
      ev.ambiguous = mt.ambiguous || !conj_pair_near_mid;
      result.events.push_back(ev);
    } else if (!lost_real.empty() && !pair_members.empty()) {
      // Something moved faster than the matcher could follow.
      CoalescenceEvent ev;
      ev.param_lo = result.parameter_values[static_cast<size_t>(s - 1)];
      ev.param_hi = result.parameter_values[static_cast<size_t>(s)];
      ev.traj_a = traj_of_slot[static_cast<size_t>(lost_real[0])];
      ev.traj_b = lost_real.size() > 1
                      ? traj_of_slot[static_cast<size_t>(lost_real[1])]
                      : -1;
      ev.ambiguous = true;
      result.events.push_back(ev);
    }

    traj_of_slot = new_traj_of_slot;
    prev_vals = cur_vals;
  }
  return result;
}

}  // namespace ptspec
