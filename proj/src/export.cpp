#include "fluct/export.hpp"

#include "json.hpp"

#include "fluct/csv.hpp"

namespace fluct {

using ordered_json = nlohmann::ordered_json;

std::string csv_of_cdf(const EmpiricalCdf& cdf) {
  std::string out = "value,survival\n";
  for (std::size_t i = 0; i < cdf.sorted_values.size(); ++i)
    out += format_double(cdf.sorted_values[i]) + "," + format_double(cdf.survival[i]) + "\n";
  return out;
}

std::string csv_of_acf(const AcfResult& acf) {
  std::string out = "lag,c\n";
  for (std::size_t i = 0; i < acf.lags.size(); ++i)
    out += std::to_string(acf.lags[i]) + "," + format_double(acf.values[i]) + "\n";
  return out;
}

std::string csv_of_surface(const FluctuationSurface& surf) {
  std::string out = "q";
  for (int s : surf.scales) out += "," + std::to_string(s);
  out += "\n";
  for (std::size_t qi = 0; qi < surf.q_grid.size(); ++qi) {
    out += format_double(surf.q_grid[qi]);
    for (std::size_t si = 0; si < surf.scales.size(); ++si)
      out += "," + format_double(surf.values[qi][si]);
    out += "\n";
  }
  return out;
}

std::string csv_of_rho(const RhoQResult& rho) {
  std::string out = "q";
  for (int s : rho.scales) out += "," + std::to_string(s);
  out += "\n";
  for (std::size_t qi = 0; qi < rho.q_grid.size(); ++qi) {
    out += format_double(rho.q_grid[qi]);
    for (std::size_t si = 0; si < rho.scales.size(); ++si)
      out += "," + format_double(rho.rho[qi][si]);
    out += "\n";
  }
  return out;
}

std::string csv_of_impact(const std::vector<ImpactCurve>& curves) {
  std::string csv = "v_center,count,in_fit";
  for (const ImpactCurve& c : curves)
    csv += ",mean_k" + format_double(c.kappa) + ",stdev_k" + format_double(c.kappa);
  csv += "\n";
  for (std::size_t cell = 0; cell < curves.front().v_centers.size(); ++cell) {
    csv += format_double(curves.front().v_centers[cell]);
    csv += "," + std::to_string(curves.front().counts[cell]);
    csv += "," + std::to_string(static_cast<int>(curves.front().in_fit[cell]));
    for (const ImpactCurve& c : curves)
      csv += "," + format_double(c.means[cell]) + "," + format_double(c.stdevs[cell]);
    csv += "\n";
  }
  return csv;
}

std::string json_of_tail(const std::string& label, std::size_t n, double tail_fraction,
                         const EmpiricalCdf& cdf) {
  ordered_json j;
  j["label"] = label;
  j["n"] = n;
  j["tail_fraction"] = tail_fraction;
  try {
    const TailFit fit = fit_tail_exponent(cdf, tail_fraction);
    j["exponent"] = fit.exponent;
    j["stderr"] = fit.stderr_;
    j["xmin"] = fit.xmin;
    j["n_tail"] = fit.n_tail;
    j["levy_regime"] = fit.levy_regime;
    j["non_power_law"] = fit.non_power_law;
    j["stability_drift"] = fit.stability_drift;
  } catch (const std::exception& e) {
    j["tail_fit_error"] = e.what();
  }
  return j.dump(2) + "\n";
}

std::string json_of_acf_scan(const std::string& label, const AcfResult& acf,
                             const AcfRangeScan& scan) {
  ordered_json j;
  j["label"] = label;
  j["n"] = acf.n;
  j["noise_level"] = acf.noise_level;
  j["first_insignificant_lag"] = scan.first_insignificant_lag;
  j["first_zero_crossing"] = scan.first_zero_crossing;
  j["ranges"] = ordered_json::array();
  for (const PowerLawRange& r : scan.ranges) {
    ordered_json rj;
    rj["tau_lo"] = r.tau_lo;
    rj["tau_hi"] = r.tau_hi;
    rj["slope"] = r.slope;
    rj["r2"] = r.r2;
    rj["n_points"] = r.n_points;
    j["ranges"].push_back(rj);
  }
  return j.dump(2) + "\n";
}

std::string json_of_spectrum(const std::string& label, int poly_degree,
                             const SpectrumResult& spec) {
  ordered_json j;
  j["label"] = label;
  j["poly_degree"] = poly_degree;
  j["fit_lo"] = spec.fit_lo;
  j["fit_hi"] = spec.fit_hi;
  j["h2"] = spec.h2;
  j["alpha0"] = spec.alpha0;
  j["width"] = spec.width;
  j["asymmetry"] = spec.asymmetry;
  j["q"] = spec.q_grid;
  j["h"] = spec.h_of_q;
  j["fit_r2"] = spec.fit_r2;
  j["alpha"] = spec.alpha;
  j["f_alpha"] = spec.f_alpha;
  return j.dump(2) + "\n";
}

std::string json_of_selection(const std::string& label, int dt_minutes,
                              const ModelSelectionReport& report) {
  ordered_json j;
  j["label"] = label;
  j["dt_minutes"] = dt_minutes;
  j["r2_threshold"] = report.r2_threshold;
  j["ranking"] = ordered_json::array();
  for (const KappaRank& r : report.ranking) {
    ordered_json rj;
    rj["kappa"] = r.kappa;
    rj["linearity_r2"] = r.linearity_r2;
    rj["fit_slope"] = r.fit_slope;
    rj["rejected"] = r.rejected;
    j["ranking"].push_back(rj);
  }
  return j.dump(2) + "\n";
}

}  // namespace fluct
