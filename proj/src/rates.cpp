#include "cdb/rates.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cdb {

double gamma_q(int n, int q) {
  if (q == 0) return 0.5 * n;
  return 0.5 * n * (1.0 - 1.0 / q);
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, resid = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const int m = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    sx += x[static_cast<std::size_t>(i)];
    sy += y[static_cast<std::size_t>(i)];
    sxx += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    sxy += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  }
  LineFit f;
  const double denom = m * sxx - sx * sx;
  f.slope = (m * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / m;
  double ss = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = y[static_cast<std::size_t>(i)] -
                     (f.intercept + f.slope * x[static_cast<std::size_t>(i)]);
    ss += r * r;
  }
  f.resid = std::sqrt(ss / m);
  return f;
}

}  // namespace

FitResult fit_rates(const std::vector<std::pair<double, double>>& series, double t_min) {
  std::vector<double> x, y_plain, y_log;
  for (const auto& [t, v] : series) {
    if (t < t_min || t <= 1.05) continue;  // log log t needs t above 1
    if (v <= 0.0) throw std::invalid_argument("fit_rates: non-positive norm");
    x.push_back(std::log(t));
    y_plain.push_back(std::log(v));
    y_log.push_back(std::log(v) - std::log(std::log(t)));
  }
  if (x.size() < 5) throw std::invalid_argument("fit_rates: fewer than 5 usable points");
  const LineFit fp = least_squares(x, y_plain);
  const LineFit fl = least_squares(x, y_log);
  FitResult out;
  out.points = static_cast<int>(x.size());
  out.p_plain = -fp.slope;
  out.c_plain = fp.intercept;
  out.resid_plain = fp.resid;
  out.p_log = -fl.slope;
  out.c_log = fl.intercept;
  out.resid_log = fl.resid;
  out.prefer_log = fl.resid < fp.resid;
  return out;
}

Field remainder(const SolutionRun& run, const ExpansionSpec& spec, double t, int cutoff,
                bool include_log) {
  const int i = run.index_of(t);
  Field r = run.field(i);
  if (r.grid.n != spec.n)
    throw std::invalid_argument("remainder: run/spec dimension mismatch");
  if (cutoff < 0 && !include_log) return r;
  const Field ex = eval_expansion(spec, t, r.grid, include_log, cutoff);
  for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] -= ex.values[k];
  return r;
}

const QSeries& DecayReport::at_q(int q) const {
  for (const auto& f : fits)
    if (f.q == q) return f;
  throw std::out_of_range("DecayReport: no such q");
}

DecayReport remainder_report(const SolutionRun& run, const ExpansionSpec& spec, int cutoff,
                             bool include_log, double t_min) {
  DecayReport rep;
  rep.n = run.config.n;
  rep.cutoff = cutoff;
  rep.include_log = include_log;
  rep.t_min = t_min;
  QSeries q1{1, {}, {}}, q2{2, {}, {}}, qi{0, {}, {}};
  for (int i = 1; i < run.count(); ++i) {
    const double t = run.times[static_cast<std::size_t>(i)];
    if (t < t_min) continue;
    const Field r = remainder(run, spec, t, cutoff, include_log);
    q1.series.emplace_back(t, r.l1());
    q2.series.emplace_back(t, r.l2());
    qi.series.emplace_back(t, r.linf());
  }
  for (auto* qs : {&q1, &q2, &qi}) {
    qs->fit = fit_rates(qs->series, t_min);
    rep.fits.push_back(*qs);
  }
  return rep;
}

DecayVerdict verdict(DecayReport& report, const std::string& claim, int q, double predicted,
                     double tolerance) {
  const auto& fit = report.at_q(q).fit;
  DecayVerdict v;
  v.claim = claim;
  v.q = q;
  v.predicted = predicted;
  v.fitted = fit.preferred_exponent();
  v.tolerance = tolerance;
  v.model = fit.prefer_log ? "log" : "plain";
  v.pass = std::abs(v.fitted - predicted) <= tolerance;
  report.verdicts.push_back(v);
  return v;
}

LogAffineFit fit_log_affine(const std::vector<std::pair<double, double>>& series,
                            double exponent, double t_min) {
  std::vector<double> x, y;
  for (const auto& [t, v] : series) {
    if (t < t_min || t <= 1.05) continue;
    x.push_back(std::log(t));
    y.push_back(v * std::pow(t, exponent));
  }
  if (x.size() < 3) throw std::invalid_argument("fit_log_affine: fewer than 3 points");
  const LineFit f = least_squares(x, y);
  return {f.slope, f.intercept, f.resid};
}

std::string decay_report_json(const DecayReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["cutoff"] = report.cutoff;
  j["include_log"] = report.include_log;
  j["t_min"] = report.t_min;
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : report.fits) {
    nlohmann::json jf;
    jf["q"] = (f.q == 0) ? "inf" : std::to_string(f.q);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [t, v] : f.series) pts.push_back({{"t", t}, {"norm", v}});
    jf["series"] = pts;
    jf["p_plain"] = f.fit.p_plain;
    jf["residual_plain"] = f.fit.resid_plain;
    jf["p_log"] = f.fit.p_log;
    jf["residual_log"] = f.fit.resid_log;
    jf["preferred"] = f.fit.prefer_log ? "log" : "plain";
    fits.push_back(jf);
  }
  j["fits"] = fits;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : report.verdicts)
    vs.push_back({{"claim", v.claim},
                  {"q", v.q == 0 ? "inf" : std::to_string(v.q)},
                  {"predicted", v.predicted},
                  {"fitted", v.fitted},
                  {"tolerance", v.tolerance},
                  {"model", v.model},
                  {"pass", v.pass}});
  j["verdicts"] = vs;
  return j.dump(2);
}

void write_decay_csv(const DecayReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_decay_csv: cannot open " + path);
  f << "q,log_t,log_norm,model_plain,model_log\n";
  f.precision(16);
  for (const auto& qs : report.fits) {
    for (const auto& [t, v] : qs.series) {
      const double x = std::log(t);
      const double mp = qs.fit.c_plain - qs.fit.p_plain * x;
      const double ml = qs.fit.c_log - qs.fit.p_log * x + std::log(std::log(t));
      f << (qs.q == 0 ? "inf" : std::to_string(qs.q)) << ',' << x << ',' << std::log(v)
        << ',' << mp << ',' << ml << '\n';
    }
  }
}

}  // namespace cdb
