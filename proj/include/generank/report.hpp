#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "generank/solvers.hpp"

namespace generank {

inline constexpr const char* kVersion = "0.1.0";

/// Where a run's inputs came from; echoed into every output document.
struct Provenance {
  std::string matrix;      // file path or generator description
  std::string ex_kind;     // uniform | random | file
  std::uint64_t seed = 0;  // seed for generated inputs
  std::size_t n = 0;
  std::size_t nnz = 0;
};

nlohmann::json to_json(const SolveReport& report, const Provenance& provenance);
void write_report_json(const SolveReport& report, const Provenance& provenance,
                       const std::filesystem::path& path);

/// `gene_id,score,rank` rows in rank order. Without ids, 1-based row
/// numbers stand in.
void write_ranking_csv(std::span<const double> x, std::span<const std::string> gene_ids,
                       std::ostream& out);
void write_ranking_csv(std::span<const double> x, std::span<const std::string> gene_ids,
                       const std::filesystem::path& path);

}  // namespace generank
