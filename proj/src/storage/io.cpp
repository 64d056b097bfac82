#include "joinrelax/storage/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "joinrelax/error.hpp"

namespace joinrelax {

TripleStore read_triples(std::istream& is) {
  TripleStoreBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string s, p, o, extra;
    if (!(ls >> s >> p >> o) || (ls >> extra)) {
      throw FormatError("triple file line " + std::to_string(line_no) + ": expected three labels");
    }
    builder.add(s, p, o);
  }
  return std::move(builder).build();
}

TripleStore load_triples(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot read " + path.string());
  return read_triples(is);
}

void write_triples(std::ostream& os, const TripleStore& store) {
  const auto& dict = store.dictionary();
  for (const Triple& t : store.triples()) {
    os << dict.label(t.s) << ' ' << dict.label(t.p) << ' ' << dict.label(t.o) << '\n';
  }
}

void save_triples(const std::filesystem::path& path, const TripleStore& store) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot write " + path.string());
  write_triples(os, store);
}

namespace {

std::string term_to_text(const Term& term, const Dictionary& dict) {
  if (term.is_variable()) return term.name();
  if (term.id() == kUnknownEntity) throw StructuralError("cannot serialise an unknown constant");
  return dict.label(term.id());
}

Term term_from_text(const std::string& text, const Dictionary& dict) {
  if (text.empty()) throw FormatError("query file: empty term");
  if (text.front() == '?') return Term::variable(text);
  return Term::constant(dict.find(text).value_or(kUnknownEntity));
}

}  // namespace

std::string query_to_json(const Query& query, const Dictionary& dictionary) {
  nlohmann::ordered_json doc;
  doc["id"] = query.id;
  doc["shape"] = std::string(to_string(query.shape));
  auto patterns = nlohmann::ordered_json::array();
  for (const auto& tp : query.patterns) {
    nlohmann::ordered_json p;
    p["s"] = term_to_text(tp.s, dictionary);
    p["p"] = term_to_text(tp.p, dictionary);
    p["o"] = term_to_text(tp.o, dictionary);
    patterns.push_back(std::move(p));
  }
  doc["patterns"] = std::move(patterns);
  return doc.dump(2) + "\n";
}

Query query_from_json(const std::string& text, const Dictionary& dictionary) {
  try {
    const auto doc = nlohmann::json::parse(text);
    Query q;
    q.id = doc.at("id").get<std::string>();
    q.shape = parse_shape(doc.value("shape", std::string("other")));
    for (const auto& p : doc.at("patterns")) {
      q.patterns.push_back({term_from_text(p.at("s").get<std::string>(), dictionary),
                            term_from_text(p.at("p").get<std::string>(), dictionary),
                            term_from_text(p.at("o").get<std::string>(), dictionary)});
    }
    if (q.patterns.empty()) throw FormatError("query '" + q.id + "' has no patterns");
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("query file: ") + e.what());
  }
}

void save_query(const std::filesystem::path& path, const Query& query, const Dictionary& dictionary) {
  write_file(path, query_to_json(query, dictionary));
}

Query load_query(const std::filesystem::path& path, const Dictionary& dictionary) {
  return query_from_json(read_file(path), dictionary);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot write " + path.string());
  os << contents;
}

}  // namespace joinrelax
