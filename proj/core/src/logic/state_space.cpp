#include "dcv/logic/state_space.hpp"

#include <set>
#include <stdexcept>

namespace dcv::logic {

Sort sortOf(frontend::ColumnType t) {
  switch (t) {
  case frontend::ColumnType::Address: return Sort::address();
  case frontend::ColumnType::UInt: return Sort::uinteger();
  case frontend::ColumnType::Int: return Sort::integer();
  case frontend::ColumnType::Bool: return Sort::boolean();
  }
  return Sort::boolean();
}

const std::vector<StateVar>& StateSpace::of(const std::string& relation) const {
  static const std::vector<StateVar> none;
  auto it = byRelation_.find(relation);
  return it == byRelation_.end() ? none : it->second;
}

const StateVar* StateSpace::find(const std::string& name) const {
  for (const auto& v : vars_)
    if (v.name == name) return &v;
  return nullptr;
}

StateSpace mkStateVars(const frontend::ValidatedContract& c) {
  StateSpace ss;
  std::set<std::string> taken;
  for (const auto* d : c.stateRelations()) taken.insert(d->name);

  auto unique = [&](const std::string& base, bool ownName) {
    if (ownName) return base;
    std::string n = base;
    for (int i = 2; taken.count(n); ++i) n = base + std::to_string(i);
    taken.insert(n);
    return n;
  };

  for (const auto* d : c.stateRelations()) {
    std::vector<StateVar> vars;
    if (d->singleton) {
      for (const auto& col : d->columns) {
        bool own = d->columns.size() == 1;
        vars.push_back({unique(own ? d->name : d->name + "_" + col.name, own), sortOf(col.type),
                        d->name, col.name});
      }
    } else {
      std::vector<Sort> keySorts;
      for (auto k : d->keyColumns()) keySorts.push_back(sortOf(d->columns[k].type));
      auto values = d->valueColumns();
      if (values.empty()) {
        vars.push_back({d->name, Sort::map(keySorts, Sort::boolean()), d->name, kMemberColumn});
      } else {
        for (auto v : values) {
          const auto& col = d->columns[v];
          bool own = values.size() == 1;
          vars.push_back({unique(own ? d->name : d->name + "_" + col.name, own),
                          Sort::map(keySorts, sortOf(col.type)), d->name, col.name});
        }
      }
    }
    ss.vars_.insert(ss.vars_.end(), vars.begin(), vars.end());
    ss.byRelation_.emplace(d->name, std::move(vars));
  }
  return ss;
}

} // namespace dcv::logic
