#include "fixtures.h"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace wcetw::fixture {

std::string data_path(const std::string& relative) { return std::string(WCETW_DATA_DIR) + "/" + relative; }

const model::Metamodel& modes3() {
  static const model::Metamodel mm = io::metamodel_from_json(io::read_json_file(data_path("modes3/metamodel.json")));
  return mm;
}

const model::SignaturePtr& modes3_signature() { return modes3().signature; }

const model::WellFormedness& modes3_wellformedness() {
  static const model::WellFormedness wf = [] {
    model::WellFormedness out = model::expand_metamodel(modes3());
    model::Theory extra = io::theory_from_json(io::read_json_file(data_path("modes3/wellformedness.json")));
    for (const auto& e : extra.entries()) {
      out.theory.add(e.predicate, e.variable);
      out.scope.add_eq(linear::LinExpr::var(e.variable), 0);
    }
    return out;
  }();
  return wf;
}

model::PartialModel load_model(const std::string& name) {
  return io::model_from_json(io::read_json_file(data_path("modes3/" + name + ".json")), modes3_signature());
}

logic::Predicate close_trains() {
  std::ifstream in(data_path("modes3/close_trains.txt"));
  std::stringstream ss;
  ss << in.rdbuf();
  return logic::parse_predicate(ss.str());
}

logic::Predicate train_count() { return logic::parse_predicate("trains(v1) := Train(v1)"); }

logic::Predicate asymmetric_connected() {
  return logic::parse_predicate("asym(u, v) := connectedTo(u, v) & !connectedTo(v, u)");
}

model::Theory example_theory() {
  model::Theory t;
  t.add(train_count(), "x1");
  t.add(asymmetric_connected(), "x2");
  return t;
}

}  // namespace wcetw::fixture

namespace wcetw::fixture {

model::PartialModel random_railway(std::mt19937_64& rng, int segments, int turnouts, int trains) {
  std::vector<std::string> ids;
  for (int i = 0; i < segments; ++i) ids.push_back("s" + std::to_string(i));
  for (int i = 0; i < trains; ++i) ids.push_back("tr" + std::to_string(i));
  model::PartialModel m(modes3_signature(), ids);
  const auto& sig = m.signature();
  const auto seg = *sig.find("Segment"), tu = *sig.find("Turnout"), tr = *sig.find("Train");
  const auto conn = *sig.find("connectedTo"), loc = *sig.find("location"), occ = *sig.find("occupiedBy");
  const auto straight = *sig.find("straight"), divergent = *sig.find("divergent");
  auto idx = [&](const std::string& id) { return m.require_index(id); };

  std::vector<int> degree(segments, 0);
  std::vector<std::vector<int>> adj(segments);
  std::uniform_int_distribution<int> pick(0, std::max(segments - 1, 0));
  for (int tries = 0; tries < 3 * segments; ++tries) {
    int a = pick(rng), b = pick(rng);
    if (a == b || degree[a] >= 2 || degree[b] >= 2) continue;
    if (std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
    ++degree[a];
    ++degree[b];
    const int ia = idx("s" + std::to_string(a)), ib = idx("s" + std::to_string(b));
    m.set(conn, ia, ib, model::Truth::kTrue);
    m.set(conn, ib, ia, model::Truth::kTrue);
  }
  for (int i = 0; i < segments; ++i) m.set(seg, idx("s" + std::to_string(i)), model::Truth::kTrue);

  std::vector<int> order(segments);
  for (int i = 0; i < segments; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 0; k < std::min(turnouts, segments); ++k) {
    const int s = order[k];
    const int is = idx("s" + std::to_string(s));
    m.set(tu, is, model::Truth::kTrue);
    std::vector<int> nb = adj[s];
    std::shuffle(nb.begin(), nb.end(), rng);
    if (nb.size() >= 1) m.set(straight, is, idx("s" + std::to_string(nb[0])), model::Truth::kTrue);
    if (nb.size() >= 2) m.set(divergent, is, idx("s" + std::to_string(nb[1])), model::Truth::kTrue);
  }

  std::bernoulli_distribution placed(0.85);
  for (int i = 0; i < trains; ++i) {
    const int it = idx("tr" + std::to_string(i));
    m.set(tr, it, model::Truth::kTrue);
    if (segments == 0 || !placed(rng)) continue;
    const int is = idx("s" + std::to_string(pick(rng)));
    m.set(loc, it, is, model::Truth::kTrue);
    m.set(occ, is, it, model::Truth::kTrue);
  }
  return m;
}

}  // namespace wcetw::fixture

namespace wcetw::fixture {

witness::WitnessTask placement_task() {
  model::PartialModel p = io::model_from_json(io::read_json_file(data_path("modes3/placement/model.json")),
                                              modes3_signature());
  model::Theory t = io::theory_from_json(io::read_json_file(data_path("modes3/placement/theory.json")));
  model::WellFormedness wf = model::expand_metamodel(modes3());
  t.append(wf.theory);
  linear::LinearSystem scope = p.scope();
  scope.append(wf.scope);
  p.set_scope(scope);
  return witness::WitnessTask{p, t, linear::LinExpr::var("x2", 250), {}, {}};
}

}  // namespace wcetw::fixture
