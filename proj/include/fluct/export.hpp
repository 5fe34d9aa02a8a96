#pragma once

#include <string>
#include <vector>

#include "fluct/acf.hpp"
#include "fluct/cdf.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/impact.hpp"

namespace fluct {

// Deterministic plot-ready serializations (fixed float formatting, fixed key
// order) shared by the batch runner and the command-line front end.

std::string csv_of_cdf(const EmpiricalCdf& cdf);
std::string csv_of_acf(const AcfResult& acf);
std::string csv_of_surface(const FluctuationSurface& surf);
std::string csv_of_rho(const RhoQResult& rho);
std::string csv_of_impact(const std::vector<ImpactCurve>& curves);

std::string json_of_tail(const std::string& label, std::size_t n, double tail_fraction,
                         const EmpiricalCdf& cdf);
std::string json_of_acf_scan(const std::string& label, const AcfResult& acf,
                             const AcfRangeScan& scan);
std::string json_of_spectrum(const std::string& label, int poly_degree,
                             const SpectrumResult& spec);
std::string json_of_selection(const std::string& label, int dt_minutes,
                              const ModelSelectionReport& report);

}  // namespace fluct
