#include "radar/report.hpp"

#include <cstdio>

namespace radar {

std::string fmt17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string render_front_csv(const SemanticModel& model, const AnalysisResult& result) {
  std::string out = "solution";
  const DesignSpace& ds = result.design_space;
  for (size_t d = 0; d < ds.decisions().size(); ++d) {
    out += ',';
    out += ds.decisions()[d].name;
  }
  for (const auto& obj : model.objectives()) {
    out += ',';
    out += obj.name;
  }
  out += '\n';
  for (size_t s : result.shortlist) {
    out += std::to_string(s);
    for (size_t d = 0; d < ds.decisions().size(); ++d) {
      out += ',';
      out += ds.binding(s, d);
    }
    for (size_t o = 0; o < result.sim.num_objectives; ++o) {
      out += ',';
      out += fmt17(result.sim.mean(s, o));
    }
    out += '\n';
  }
  return out;
}

std::string render_voi_csv(const AnalysisResult& result) {
  std::string out = "quantity,parameter,value\n";
  if (!result.voi) return out;
  out += "EVTPI,,";
  out += fmt17(result.voi->evtpi_value);
  out += '\n';
  for (const auto& row : result.voi->evppi_values) {
    out += "EVPPI,";
    out += row.parameter;
    out += ',';
    out += fmt17(row.value);
    out += '\n';
  }
  return out;
}

}  // namespace radar
