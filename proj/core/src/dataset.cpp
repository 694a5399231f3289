#include "csgen/dataset.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "csgen/csv.hpp"
#include "csgen/error.hpp"
#include "csgen/tokenize.hpp"

namespace csgen {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::dev: return "dev";
    case Split::train: return "train";
    case Split::test: return "test";
  }
  return "test";
}

std::optional<Split> parse_split(std::string_view tag) {
  if (tag == "dev") return Split::dev;
  if (tag == "train") return Split::train;
  if (tag == "test") return Split::test;
  return std::nullopt;
}

int expected_split_size(Split split) {
  switch (split) {
    case Split::dev: return 100;
    case Split::train: return 396;
    case Split::test: return 100;
  }
  return 0;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError("missing column '" + name + "'");
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path, Language language, Split split) {
  std::string content = read_file(path);
  if (!utf8_valid(content)) {
    throw DataError("file is not valid UTF-8: " + path.string());
  }
  std::vector<std::vector<std::string>> rows = csv::parse(content);
  if (rows.empty()) throw DataError("no instances in " + path.string());

  const std::vector<std::string>& header = rows.front();
  const std::size_t id_col = column_index(header, "id");
  const std::size_t hs_col = column_index(header, "hate_speech");
  std::array<std::size_t, 5> bk_cols{};
  for (int i = 0; i < 5; ++i) {
    bk_cols[static_cast<std::size_t>(i)] = column_index(header, "bk" + std::to_string(i + 1));
  }
  std::optional<std::size_t> cn_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "counter_narrative") cn_col = i;
  }

  Dataset dataset;
  dataset.split = split;
  dataset.language = language;
  std::unordered_set<std::string> seen_ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::vector<std::string>& row = rows[r];
    if (row.size() != header.size()) {
      const std::string id = row.empty() ? "<row " + std::to_string(r) + ">" : row.front();
      throw DataError("row " + id + ": has " + std::to_string(row.size()) +
                      " fields, expected " + std::to_string(header.size()));
    }
    HsInstance instance;
    instance.id = row[id_col];
    instance.language = language;
    instance.hate_speech = row[hs_col];
    if (instance.id.empty()) {
      throw DataError("row " + std::to_string(r) + ": empty id");
    }
    for (int i = 0; i < 5; ++i) {
      const std::string& sentence = row[bk_cols[static_cast<std::size_t>(i)]];
      if (sentence.empty()) {
        throw DataError("row " + instance.id + ": background sentence " + std::to_string(i + 1) +
                        " is empty (need all 5)");
      }
      instance.background[static_cast<std::size_t>(i)] = sentence;
    }
    if (cn_col && *cn_col < row.size() && !row[*cn_col].empty()) {
      instance.reference_cn = row[*cn_col];
    }
    if (!seen_ids.insert(instance.id).second) {
      throw DataError("duplicate id '" + instance.id + "'");
    }
    validate_instance(instance);
    dataset.instances.push_back(std::move(instance));
  }
  if (dataset.instances.empty()) throw DataError("no instances in " + path.string());

  const int expected = expected_split_size(split);
  if (static_cast<int>(dataset.instances.size()) != expected) {
    spdlog::warn("{} split has {} instances, official size is {}", to_string(split),
                 dataset.instances.size(), expected);
  }
  return dataset;
}

void write_rank_file(const RankFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  const std::string header[] = {"id", "counterspeech"};
  out << csv::write_row(header);
  for (const auto& [id, text] : file.rows) {
    const std::string row[] = {id, text};
    out << csv::write_row(row);
  }
  if (!out) throw DataError("write failed: " + path.string());
}

RankFile read_rank_file(const std::filesystem::path& path, int rank, Language language) {
  std::string content = read_file(path);
  std::vector<std::vector<std::string>> rows = csv::parse(content);
  if (rows.empty() || rows.front() != std::vector<std::string>{"id", "counterspeech"}) {
    throw DataError("rank file " + path.string() + " lacks the id,counterspeech header");
  }
  RankFile file;
  file.rank = rank;
  file.language = language;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) {
      throw DataError("rank file " + path.string() + " row " + std::to_string(r) +
                      " has " + std::to_string(rows[r].size()) + " fields, expected 2");
    }
    file.rows.emplace_back(rows[r][0], rows[r][1]);
  }
  return file;
}

}  // namespace csgen
