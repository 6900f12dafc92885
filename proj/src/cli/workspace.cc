#include "wcetw/cli.h"
#include "wcetw/error.h"
#include "wcetw/io.h"

namespace wcetw::cli {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& root, const Json& j, const char* name) {
  if (!j.is_string()) throw Error(ErrorKind::kValidation, std::string("workspace field ") + name + " must be a path");
  fs::path p = j.get<std::string>();
  if (p.is_relative()) p = root / p;
  if (!fs::exists(p)) throw Error(ErrorKind::kValidation, std::string(name) + " file " + p.string() + " does not exist");
  return p;
}

std::vector<fs::path> resolve_list(const fs::path& root, const Json& j, const char* name) {
  std::vector<fs::path> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(resolve(root, e, name));
  } else {
    out.push_back(resolve(root, j, name));
  }
  return out;
}

}  // namespace

model::Theory Workspace::full_theory() const {
  model::Theory t = theory;
  t.append(wellformedness);
  return t;
}

linear::LinearSystem Workspace::wellformedness_scope() const {
  linear::LinearSystem s;
  for (const auto& e : wellformedness.entries()) s.add_eq(linear::LinExpr::var(e.variable), 0);
  return s;
}

Workspace load_workspace(const fs::path& path) {
  Workspace ws;
  const Json j = io::read_json_file(path);
  if (!j.is_object()) throw Error(ErrorKind::kValidation, "workspace must be a JSON object");
  ws.root = fs::absolute(path).parent_path();
  try {
    ws.metamodel = io::metamodel_from_json(io::read_json_file(resolve(ws.root, io::field(j, "metamodel"), "metamodel")));
    const auto& sig = ws.metamodel.signature;
    if (j.contains("theory")) {
      for (const auto& p : resolve_list(ws.root, j.at("theory"), "theory")) ws.theory.append(io::theory_from_json(io::read_json_file(p)));
    }
    if (j.contains("wellformedness")) {
      const Json& wf = j.at("wellformedness");
      if (wf.value("metamodel", false)) ws.wellformedness.append(model::expand_metamodel(ws.metamodel).theory);
      if (wf.contains("extra")) {
        for (const auto& p : resolve_list(ws.root, wf.at("extra"), "wellformedness")) {
          ws.wellformedness.append(io::theory_from_json(io::read_json_file(p)));
        }
      }
    }
    (void)ws.full_theory();  // rejects clashes between the two theories
    if (j.contains("scope")) ws.scope = io::scope_from_json(j.at("scope"));
    if (j.contains("plan")) ws.plan = queryc::plan_from_json(io::read_json_file(resolve(ws.root, j.at("plan"), "plan")));
    if (j.contains("profile")) {
      ws.profile = queryc::profile_from_json(io::read_json_file(resolve(ws.root, j.at("profile"), "profile")));
    }
    if (j.contains("cfg")) ws.cfg = queryc::load_cfg(resolve(ws.root, j.at("cfg"), "cfg"));
    for (const char* key : {"model", "models"}) {
      if (!j.contains(key)) continue;
      for (const auto& p : resolve_list(ws.root, j.at(key), key)) {
        ws.models.emplace_back(p.stem().string(), io::model_from_json(io::read_json_file(p), sig));
      }
    }
    if (j.contains("partial_model")) {
      ws.partial_model =
          io::model_from_json(io::read_json_file(resolve(ws.root, j.at("partial_model"), "partial_model")), sig);
    }
    if (j.contains("loop_bounds")) {
      for (const auto& [bb, n] : j.at("loop_bounds").items()) ws.loop_bounds[bb] = n.get<std::int64_t>();
    }
    if (j.contains("max_objects")) ws.max_objects = j.at("max_objects").get<std::int64_t>();
    if (j.contains("objective")) ws.objective = linear::parse_expr(io::string_field(j, "objective"));
    if (j.contains("samples")) ws.samples = j.at("samples").get<std::int64_t>();
    ws.output = fs::weakly_canonical(j.contains("output") ? ws.root / j.at("output").get<std::string>() : ws.root / "out");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("workspace: ") + e.what());
  }
  return ws;
}

}  // namespace wcetw::cli
