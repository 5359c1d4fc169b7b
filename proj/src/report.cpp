#include "generank/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "generank/error.hpp"

namespace generank {

nlohmann::json to_json(const SolveReport& report, const Provenance& provenance) {
  nlohmann::json doc;
  doc["generank_version"] = kVersion;
  doc["provenance"] = {
      {"matrix", provenance.matrix},
      {"ex", provenance.ex_kind},
      {"seed", provenance.seed},
      {"n", provenance.n},
      {"nnz", provenance.nnz},
  };
  doc["method"] = std::string(to_string(report.method));
  doc["alpha"] = report.alpha;
  doc["tol"] = report.tol;
  doc["iterations"] = report.iterations;
  doc["converged"] = report.converged;
  doc["wall_time_seconds"] = report.wall_time;
  doc["final_spd_residual_norm1"] = report.final_spd_residual;
  doc["solved_form"] = std::string(to_string(report.solution.source_form));
  doc["residual_history"] = report.residual_history;
  return doc;
}

void write_report_json(const SolveReport& report, const Provenance& provenance,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << to_json(report, provenance).dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

void write_ranking_csv(std::span<const double> x, std::span<const std::string> gene_ids,
                       std::ostream& out) {
  if (!gene_ids.empty() && gene_ids.size() != x.size()) {
    fail(ErrorCode::DimensionMismatch, "gene id count does not match the solution length");
  }
  const auto order = rank_genes(x);
  out << "gene_id,score,rank\n";
  char buf[32];
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t i = order[r];
    std::snprintf(buf, sizeof buf, "%.17g", x[i]);
    if (gene_ids.empty()) {
      out << (i + 1);
    } else {
      out << gene_ids[i];
    }
    out << ',' << buf << ',' << (r + 1) << '\n';
  }
}

void write_ranking_csv(std::span<const double> x, std::span<const std::string> gene_ids,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  write_ranking_csv(x, gene_ids, out);
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace generank
