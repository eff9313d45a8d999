#include "critnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace critnls {

double strichartz_accumulate(const std::vector<TrajectoryRecord>& records) {
  double acc = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i)
    acc += 0.5 * (records[i - 1].crit_norm_pow + records[i].crit_norm_pow) *
           (records[i].t - records[i - 1].t);
  return acc;
}

namespace {

double accum_at(const std::vector<TrajectoryRecord>& records, double t) {
  // piecewise-linear interpolation of the running accumulator
  if (records.empty()) return 0.0;
  if (t <= records.front().t) return records.front().strichartz_accum;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].t >= t) {
      const double t0 = records[i - 1].t, t1 = records[i].t;
      const double a0 = records[i - 1].strichartz_accum;
      const double a1 = records[i].strichartz_accum;
      const double w = (t1 > t0) ? (t - t0) / (t1 - t0) : 0.0;
      return a0 + w * (a1 - a0);
    }
  }
  return records.back().strichartz_accum;
}

}  // namespace

double strichartz_increment_ratio(const std::vector<TrajectoryRecord>& records) {
  if (records.size() < 4) return std::numeric_limits<double>::quiet_NaN();
  const double T = records.back().t;
  const double early = accum_at(records, 0.5 * T) - accum_at(records, 0.25 * T);
  const double late = accum_at(records, T) - accum_at(records, 0.5 * T);
  if (early <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  // the late window is twice as long; halve it for a per-time comparison
  return 0.5 * late / early;
}

SlopeCheck virial_slope_check(const std::vector<TrajectoryRecord>& records,
                              double E0) {
  std::vector<const TrajectoryRecord*> with_M;
  for (const auto& r : records)
    if (std::isfinite(r.virial_M)) with_M.push_back(&r);
  if (with_M.size() < 3)
    throw std::invalid_argument("virial_slope_check: need >= 3 virial samples");

  SlopeCheck out;
  for (std::size_t i = 1; i < with_M.size(); ++i) {
    const double dt = with_M[i]->t - with_M[i - 1]->t;
    out.times.push_back(0.5 * (with_M[i]->t + with_M[i - 1]->t));
    out.slopes.push_back((with_M[i]->virial_M - with_M[i - 1]->virial_M) / dt);
  }
  out.all_negative =
      E0 < 0.0 && std::all_of(out.slopes.begin(), out.slopes.end(),
                              [](double s) { return s < 0.0; });

  // least-squares line M(t) ~ M0 - A* t
  double st = 0.0, sm = 0.0, stt = 0.0, stm = 0.0;
  const double n = static_cast<double>(with_M.size());
  for (const auto* r : with_M) {
    st += r->t;
    sm += r->virial_M;
    stt += r->t * r->t;
    stm += r->t * r->virial_M;
  }
  const double denom = n * stt - st * st;
  const double slope = (denom != 0.0) ? (n * stm - st * sm) / denom : 0.0;
  out.fitted_A_star = -slope;
  if (out.fitted_A_star > 0.0) {
    out.fitted_T0 = 2.0 * std::abs(with_M.front()->virial_M) / out.fitted_A_star;
    bool holds = true;
    bool any = false;
    for (const auto* r : with_M) {
      if (r->t < out.fitted_T0 || r->t <= 0.0) continue;
      any = true;
      if (!(r->virial_M <= -0.5 * out.fitted_A_star * r->t)) holds = false;
    }
    out.linear_bound_checked = any;
    out.linear_bound_holds = any && holds;
  }
  return out;
}

TrappingReport trapping_check(const std::vector<TrajectoryRecord>& records,
                              double E_W, double grad_W_sq, double energy_tol) {
  TrappingReport rep;
  if (records.empty()) {
    rep.hypothesis_violated = true;
    rep.reason = "empty trajectory";
    return rep;
  }
  const TrajectoryRecord& first = records.front();
  if (!(first.energy < E_W) || !(first.grad_sq < grad_W_sq)) {
    rep.hypothesis_violated = true;
    rep.reason = "initial data not strictly below the ground-state threshold";
    return rep;
  }
  rep.delta0 = (E_W != 0.0) ? 1.0 - first.energy / E_W : 0.0;
  rep.delta1 = 1.0;
  rep.delta_bar = 1.0;
  rep.min_energy = first.energy;
  bool all = true;
  for (const auto& r : records) {
    const bool grad_ok = r.grad_sq < grad_W_sq;
    const double coercive = r.grad_sq - r.crit_norm_pow;
    const double margin = (r.grad_sq > 0.0) ? coercive / r.grad_sq : 1.0;
    const bool coercive_ok = coercive >= 0.0;
    const bool energy_ok = r.energy >= -energy_tol;
    rep.grad_bound_ok.push_back(grad_ok);
    rep.coercivity_ok.push_back(coercive_ok);
    rep.energy_sign_ok.push_back(energy_ok);
    all = all && grad_ok && coercive_ok && energy_ok;
    rep.delta1 = std::min(rep.delta1, 1.0 - r.grad_sq / grad_W_sq);
    rep.delta_bar = std::min(rep.delta_bar, margin);
    rep.min_energy = std::min(rep.min_energy, r.energy);
  }
  rep.all_hold = all;
  return rep;
}

EquivalenceReport equivalence_check(const std::vector<TrajectoryRecord>& records,
                                    double v_lq_norm, double v_neg_lq_norm,
                                    double S, int dim) {
  EquivalenceReport rep;
  const double two_star = 2.0 * dim / (dim - 2.0);
  bool any = false;
  rep.band_lo = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (!(r.grad_sq > 0.0)) continue;
    const double ratio = r.energy / r.grad_sq;
    if (!any) {
      rep.ratio_min = rep.ratio_max = ratio;
      any = true;
    } else {
      rep.ratio_min = std::min(rep.ratio_min, ratio);
      rep.ratio_max = std::max(rep.ratio_max, ratio);
    }
    // coercivity lower bound at this sample's gradient level
    const double dtil = 0.5 * (1.0 - v_neg_lq_norm / S) -
                        (1.0 / two_star) *
                            std::pow(r.grad_sq, 0.5 * (two_star - 2.0)) /
                            std::pow(S, 0.5 * two_star);
    rep.band_lo = std::min(rep.band_lo, dtil);
  }
  if (!any) {
    rep.empty = true;
    rep.band_lo = 0.0;
    return rep;
  }
  rep.band_hi = 0.5 * (1.0 + v_lq_norm / S);
  rep.within_band = rep.ratio_min >= rep.band_lo - 1e-12 &&
                    rep.ratio_max <= rep.band_hi + 1e-12;
  return rep;
}

VirialAdjudication adjudicate_virial_forms(
    const std::vector<TrajectoryRecord>& records, double match_tol) {
  std::vector<const TrajectoryRecord*> samples;
  for (const auto& r : records)
    if (std::isfinite(r.psi_mass)) samples.push_back(&r);
  if (samples.size() < 3)
    throw std::invalid_argument("adjudicate_virial_forms: need >= 3 psi samples");

  VirialAdjudication adj;
  double scale2 = 0.0, scale1 = 0.0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double dt = samples[i]->t - samples[i - 1]->t;
    const double dt2 = samples[i + 1]->t - samples[i]->t;
    if (std::abs(dt - dt2) > 1e-9 * dt) continue;  // need uniform stride
    const double z0 = samples[i - 1]->psi_mass;
    const double z1 = samples[i]->psi_mass;
    const double z2 = samples[i + 1]->psi_mass;
    adj.times.push_back(samples[i]->t);
    adj.fd_second.push_back((z2 - 2.0 * z1 + z0) / (dt * dt));
    adj.fd_first.push_back((z2 - z0) / (2.0 * dt));
    adj.paper_form.push_back(samples[i]->rhs_paper);
    adj.hessian_form.push_back(samples[i]->rhs_hessian);
    adj.virial_M.push_back(samples[i]->virial_M);
    scale2 = std::max(scale2, std::abs(adj.fd_second.back()));
    scale1 = std::max(scale1, std::abs(adj.fd_first.back()));
  }
  for (std::size_t i = 0; i < adj.times.size(); ++i) {
    const double denom2 = std::max(std::abs(adj.fd_second[i]), 0.05 * scale2);
    adj.paper_rel_err = std::max(
        adj.paper_rel_err, std::abs(adj.paper_form[i] - adj.fd_second[i]) / denom2);
    adj.hessian_rel_err =
        std::max(adj.hessian_rel_err,
                 std::abs(adj.hessian_form[i] - adj.fd_second[i]) / denom2);
    const double denom1 = std::max(std::abs(adj.fd_first[i]), 0.05 * scale1);
    adj.first_order_rel_err =
        std::max(adj.first_order_rel_err,
                 std::abs(adj.virial_M[i] - adj.fd_first[i]) / denom1);
  }
  const bool paper_ok = adj.paper_rel_err < match_tol;
  const bool hessian_ok = adj.hessian_rel_err < match_tol;
  if (hessian_ok && !paper_ok)
    adj.matched_form = "hessian";
  else if (paper_ok && !hessian_ok)
    adj.matched_form = "paper";
  else
    adj.matched_form = "none";
  return adj;
}

void write_adjudication_table(const VirialAdjudication& adj,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,fd_value,paper_form,hessian_form\n";
  out.precision(17);
  for (std::size_t i = 0; i < adj.times.size(); ++i)
    out << adj.times[i] << ',' << adj.fd_second[i] << ',' << adj.paper_form[i]
        << ',' << adj.hessian_form[i] << '\n';
}

}  // namespace critnls
