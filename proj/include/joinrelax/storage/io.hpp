#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "joinrelax/plan/query.hpp"
#include "joinrelax/storage/triple_store.hpp"

namespace joinrelax {

// Triple file: one triple per line, three whitespace-separated labels; '#' lines ignored.
TripleStore read_triples(std::istream& is);
TripleStore load_triples(const std::filesystem::path& path);
// Writes in SPO id order.
void write_triples(std::ostream& os, const TripleStore& store);
void save_triples(const std::filesystem::path& path, const TripleStore& store);

// Query file: JSON {"id", "shape", "patterns": [{"s","p","o"}]}; a leading '?' marks a
// variable. Constants are resolved against the store's dictionary; unknown labels become
// kUnknownEntity (they match nothing).
std::string query_to_json(const Query& query, const Dictionary& dictionary);
Query query_from_json(const std::string& text, const Dictionary& dictionary);
void save_query(const std::filesystem::path& path, const Query& query, const Dictionary& dictionary);
Query load_query(const std::filesystem::path& path, const Dictionary& dictionary);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace joinrelax
