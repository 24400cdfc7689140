#include "bridge.hpp"

#include <algorithm>
#include <deque>
#include <set>

#ifndef DCV_SOURCE_DIR
#error "DCV_SOURCE_DIR must name the source tree"
#endif

namespace dcv::testing {

namespace fe = dcv::frontend;
using logic::Value;

std::filesystem::path corpusDir() { return std::filesystem::path(DCV_SOURCE_DIR) / "corpus"; }

compiler::Compiled compileCorpus(const std::string& relativePath) {
  return compiler::compileFile(corpusDir() / relativePath);
}

solver::SolverConfig solverConfig(std::chrono::milliseconds timeout) {
  solver::SolverConfig cfg;
  cfg.path = DCV_SOLVER_PATH;
  cfg.timeout = timeout;
  return cfg;
}

solver::SolverConfig stubConfig(const std::string& mode, std::chrono::milliseconds timeout) {
  solver::SolverConfig cfg;
  cfg.path = (std::filesystem::path(DCV_STUB_DIR) / ("stub-" + mode)).string();
  cfg.timeout = timeout;
  return cfg;
}

std::vector<Tuple> keyTuples(const fe::RelationDecl& d, const std::vector<std::size_t>& cols, const Domain& dom) {
  std::vector<Tuple> out{{}};
  for (auto c : cols) {
    std::vector<Tuple> grown;
    for (const auto& prefix : out)
      for (auto v : dom.of(d.columns[c].type)) {
        Tuple t = prefix;
        t.push_back(v);
        grown.push_back(std::move(t));
      }
    out = std::move(grown);
  }
  return out;
}

namespace {

Value scalar(fe::ColumnType t, std::int64_t v) {
  return t == fe::ColumnType::Bool ? Value::boolean(v != 0) : Value::integer(v);
}

std::size_t columnIndex(const fe::RelationDecl& d, const std::string& name) {
  for (std::size_t i = 0; i < d.columns.size(); ++i)
    if (d.columns[i].name == name) return i;
  return d.columns.size();
}

} // namespace

void addRelation(logic::Env& env, const Interpreter& in, const logic::StateSpace& gamma, const std::string& relation,
                 const State& s, bool primed, const Domain& keys) {
  const auto& d = in.contract().relation(relation);
  for (const auto& sv : gamma.of(relation)) {
    std::string k = sv.var(primed).key();
    if (d.singleton) {
      std::size_t c = columnIndex(d, sv.column);
      env[k] = scalar(d.columns[c].type, in.read(s, relation, {}).at(c));
      continue;
    }
    std::map<std::vector<std::int64_t>, Value> entries;
    if (d.isMembership()) {
      std::vector<std::size_t> all;
      for (std::size_t i = 0; i < d.arity(); ++i) all.push_back(i);
      for (const auto& t : keyTuples(d, all, keys)) entries[t] = Value::boolean(in.member(s, relation, t));
      env[k] = Value::map(std::move(entries), Value::boolean(false));
      continue;
    }
    std::size_t c = columnIndex(d, sv.column);
    auto vc = d.valueColumns();
    std::size_t idx = std::find(vc.begin(), vc.end(), c) - vc.begin();
    for (const auto& t : keyTuples(d, d.keyColumns(), keys))
      entries[t] = scalar(d.columns[c].type, in.read(s, relation, t).at(idx));
    env[k] = Value::map(std::move(entries), scalar(d.columns[c].type, 0));
  }
}

logic::Env toEnv(const Interpreter& in, const logic::StateSpace& gamma, const State& s, bool primed,
                 const Domain& keys) {
  logic::Env env;
  for (const auto* d : in.contract().stateRelations()) addRelation(env, in, gamma, d->name, s, primed, keys);
  return env;
}

logic::FiniteDomain finiteDomain(const Domain& d) {
  logic::FiniteDomain out;
  out.values[logic::SortKind::Addr] = d.of(fe::ColumnType::Address);
  out.values[logic::SortKind::UInt] = d.of(fe::ColumnType::UInt);
  out.values[logic::SortKind::Int] = d.of(fe::ColumnType::Int);
  return out;
}

Search bfs(const Interpreter& in, const State& init, std::size_t depth, const std::function<bool(const State&)>& stop) {
  Search out;
  auto txs = in.transactions();
  struct Node {
    State s;
    std::vector<std::string> path;
  };
  std::set<State> seen{init};
  std::deque<Node> frontier{{init, {}}};
  while (!frontier.empty()) {
    Node n = std::move(frontier.front());
    frontier.pop_front();
    ++out.explored;
    if (stop(n.s)) {
      out.found = true;
      out.witness = n.s;
      out.path = n.path;
      return out;
    }
    if (n.path.size() == depth) continue;
    for (const auto& tx : txs)
      for (auto& next : in.step(n.s, tx))
        if (seen.insert(next).second) {
          auto path = n.path;
          path.push_back(tx.text(in.contract()));
          frontier.push_back({std::move(next), std::move(path)});
        }
  }
  return out;
}

} // namespace dcv::testing
