#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wcetw/queryc.h"
#include "wcetw/theory.h"

namespace wcetw::cli {

using Json = nlohmann::ordered_json;

// Everything a command may need, loaded and validated up front. Paths in the
// workspace file are relative to its directory.
struct Workspace {
  std::filesystem::path root;
  model::Metamodel metamodel;
  model::Theory theory;               // count predicates
  model::Theory wellformedness;       // every rule pinned to zero
  linear::LinearSystem scope;         // ds-sigma scope
  std::optional<queryc::SearchPlan> plan;
  queryc::TimingProfile profile;
  std::optional<queryc::Cfg> cfg;     // imported instead of built
  std::vector<std::pair<std::string, model::PartialModel>> models;
  std::optional<model::PartialModel> partial_model;
  std::map<std::string, std::int64_t> loop_bounds;
  std::optional<std::int64_t> max_objects;
  std::optional<linear::LinExpr> objective;  // replaces the IPET objective
  std::int64_t samples = 0;                  // simulate: random models drawn from the partial model
  std::filesystem::path output;

  // Count predicates followed by well-formedness rules.
  model::Theory full_theory() const;
  linear::LinearSystem wellformedness_scope() const;
};

Workspace load_workspace(const std::filesystem::path& path);

struct Options {
  std::string command;
  std::string mode;
  std::filesystem::path workspace;
  std::optional<std::filesystem::path> output;
  int workers = 1;
  std::uint64_t seed = 0;
  std::int64_t state_cap = 10'000'000;
  bool iso_reduction = false;
};

// Runs one command; the report goes to `out` as one JSON document,
// diagnostics to `err` as JSON lines. Returns the process exit code.
int run(const Options& options, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace wcetw::cli
