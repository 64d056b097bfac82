#include "joinrelax/workbench/run_config.hpp"

#include <json.hpp>
#include <set>

#include "joinrelax/error.hpp"
#include "joinrelax/storage/io.hpp"

namespace joinrelax::workbench {

using nlohmann::json;

namespace {

json document(const std::string& text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw FormatError("run configuration must be a JSON object");
    return doc;
  } catch (const json::exception& e) {
    throw FormatError(std::string("run configuration is not valid JSON: ") + e.what());
  }
}

const json* section(const json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) return nullptr;
  if (!it->is_object()) throw FormatError(std::string("section '") + name + "' must be an object");
  return &*it;
}

[[noreturn]] void unknown(const char* section, const std::string& key) {
  throw FormatError(std::string("unknown key '") + key + "' in section '" + section + "'");
}

std::vector<QueryShape> shapes(const json& v) {
  std::vector<QueryShape> out;
  for (const auto& s : v) out.push_back(parse_shape(s.get<std::string>()));
  return out;
}

bool apply_selection(QuerySelection& sel, const std::string& key, const json& v) {
  if (key == "shapes") sel.shapes = shapes(v);
  else if (key == "sizes") sel.sizes = v.get<std::vector<std::size_t>>();
  else if (key == "queries_per_size") sel.queries_per_size = v.get<std::size_t>();
  else return false;
  return true;
}

template <typename F>
void each(const json& doc, const char* name, F&& f) {
  const json* s = section(doc, name);
  if (!s) return;
  try {
    for (const auto& [key, value] : s->items()) {
      if (!f(key, value)) unknown(name, key);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed section '") + name + "': " + e.what());
  }
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  static const std::set<std::string> sections{"search",    "gen-data",      "train",      "optimize",
                                              "landscape", "bench-runtime", "front-sweep"};
  const json doc = document(text);
  for (const auto& [key, value] : doc.items()) {
    if (!sections.count(key)) throw FormatError("unknown section '" + key + "' in run configuration");
  }
  RunConfig c;
  c.text_ = text;
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) { return parse(read_file(path)); }

relax::SearchConfig RunConfig::search(const std::optional<std::string>& profile) const {
  const json doc = document(text_);
  const json* s = section(doc, "search");
  json overrides = s ? *s : json::object();
  relax::SearchConfig base = relax::profile(profile.value_or(overrides.value("profile", std::string("defaults"))));
  overrides.erase("profile");
  return relax::config_from_json(overrides.dump(), base);
}

void RunConfig::apply(GenDataSpec& spec) const {
  auto& g = spec.corpus.generator;
  each(document(text_), "gen-data", [&](const std::string& k, const json& v) {
    if (k == "entities") g.entities = v.get<std::size_t>();
    else if (k == "predicates") g.predicates = v.get<std::size_t>();
    else if (k == "triples") g.triples = v.get<std::size_t>();
    else if (k == "predicate_skew") g.predicate_skew = v.get<double>();
    else if (k == "subject_skew") g.subject_skew = v.get<double>();
    else if (k == "object_skew") g.object_skew = v.get<double>();
    else if (k == "max_fanout") g.max_fanout = v.get<std::size_t>();
    else if (k == "shapes") g.shapes = shapes(v);
    else if (k == "min_patterns") g.min_patterns = v.get<std::size_t>();
    else if (k == "max_patterns") g.max_patterns = v.get<std::size_t>();
    else if (k == "queries_per_size") g.queries_per_size = v.get<std::size_t>();
    else if (k == "constant_object_probability") g.constant_object_probability = v.get<double>();
    else if (k == "max_retries") g.max_retries = v.get<std::size_t>();
    else if (k == "row_cap") g.row_cap = v.get<std::size_t>();
    else if (k == "seed") g.seed = v.get<std::uint64_t>();
    else if (k == "plans_per_query") spec.corpus.plans_per_query = v.get<std::size_t>();
    else if (k == "allow_cross_products") spec.corpus.allow_cross_products = v.get<bool>();
    else if (k == "bushy_fraction") spec.corpus.bushy_fraction = v.get<double>();
    else return false;
    return true;
  });
}

void RunConfig::apply(TrainSpec& spec) const {
  auto& t = spec.train;
  each(document(text_), "train", [&](const std::string& k, const json& v) {
    if (k == "dataset") spec.dataset = v.get<std::string>();
    else if (k == "epochs") t.epochs = v.get<std::size_t>();
    else if (k == "batch_size") t.batch_size = v.get<std::size_t>();
    else if (k == "learning_rate") t.learning_rate = v.get<double>();
    else if (k == "dropout") t.dropout = v.get<double>();
    else if (k == "hidden") t.hidden = v.get<std::size_t>();
    else if (k == "seed") t.seed = v.get<std::uint64_t>();
    else if (k == "validation_fraction") t.validation_fraction = v.get<double>();
    else if (k == "log_target") t.log_target = v.get<bool>();
    else if (k == "embedding_dim") t.layout.embedding_dim = v.get<std::size_t>();
    else if (k == "embedding_seed") t.layout.embedding_seed = v.get<std::uint64_t>();
    else return false;
    return true;
  });
}

void RunConfig::apply(OptimizeSpec& spec) const {
  each(document(text_), "optimize", [&](const std::string& k, const json& v) {
    if (apply_selection(spec.selection, k, v)) return true;
    if (k == "dataset") spec.dataset = v.get<std::string>();
    else if (k == "model") spec.model = v.get<std::string>();
    else if (k == "fronts") spec.fronts = v.get<std::vector<std::size_t>>();
    else if (k == "dynamic_programming") spec.dynamic_programming = v.get<bool>();
    else if (k == "dp_cap") spec.dp_cap = v.get<std::size_t>();
    else if (k == "exhaustive") spec.exhaustive = v.get<bool>();
    else return false;
    return true;
  });
}

void RunConfig::apply(LandscapeSpec& spec) const {
  each(document(text_), "landscape", [&](const std::string& k, const json& v) {
    if (k == "dataset") spec.dataset = v.get<std::string>();
    else if (k == "model") spec.model = v.get<std::string>();
    else if (k == "plan1") spec.plan1 = v.get<std::string>();
    else if (k == "plan2") spec.plan2 = v.get<std::string>();
    else if (k == "points") spec.points = v.get<std::size_t>();
    else if (k == "pairs") spec.pairs = v.get<std::size_t>();
    else if (k == "min_patterns") spec.min_patterns = v.get<std::size_t>();
    else if (k == "seed") spec.seed = v.get<std::uint64_t>();
    else return false;
    return true;
  });
}

void RunConfig::apply(BenchSpec& spec) const {
  each(document(text_), "bench-runtime", [&](const std::string& k, const json& v) {
    if (k == "dataset") spec.dataset = v.get<std::string>();
    else if (k == "model") spec.model = v.get<std::string>();
    else if (k == "sizes") spec.sizes = v.get<std::vector<std::size_t>>();
    else if (k == "repetitions") spec.repetitions = v.get<std::size_t>();
    else if (k == "shape") spec.shape = parse_shape(v.get<std::string>());
    else if (k == "dp_cap") spec.dp_cap = v.get<std::size_t>();
    else if (k == "iterations") spec.search.iterations = v.get<std::size_t>();
    else if (k == "seed") spec.seed = v.get<std::uint64_t>();
    else return false;
    return true;
  });
}

void RunConfig::apply(FrontSweepSpec& spec) const {
  each(document(text_), "front-sweep", [&](const std::string& k, const json& v) {
    if (apply_selection(spec.selection, k, v)) return true;
    if (k == "dataset") spec.dataset = v.get<std::string>();
    else if (k == "model") spec.model = v.get<std::string>();
    else if (k == "ks") spec.ks = v.get<std::vector<std::size_t>>();
    else return false;
    return true;
  });
}

}  // namespace joinrelax::workbench
