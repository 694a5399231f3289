#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "csgen/csv.hpp"
#include "csgen/error.hpp"
#include "csgen/rng.hpp"

using namespace csgen;
using Row = std::vector<std::string>;
using Table = std::vector<Row>;

namespace {

// Random field content drawn to exercise the quoting rules hard: plain
// letters plus delimiters, quotes and newlines.
std::string random_field(Rng& rng) {
  static const std::string pool = "ab,\"\n\r x";
  std::string out;
  const std::size_t len = rng.next_below(6);
  for (std::size_t i = 0; i < len; ++i) out += pool[rng.next_below(pool.size())];
  return out;
}

}  // namespace

TEST_CASE("plain rows parse into fields") {
  auto rows = csv::parse("a,b,c\nd,e,f\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == Row{"a", "b", "c"});
  CHECK(rows[1] == Row{"d", "e", "f"});
}

TEST_CASE("a missing final newline still ends the last row") {
  auto rows = csv::parse("a,b\nc,d");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == Row{"c", "d"});
}

TEST_CASE("CRLF line endings are accepted") {
  auto rows = csv::parse("a,b\r\nc,d\r\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == Row{"a", "b"});
  CHECK(rows[1] == Row{"c", "d"});
}

TEST_CASE("quoted fields carry delimiters, newlines and escaped quotes") {
  auto rows = csv::parse("\"a,b\",\"line1\nline2\",\"say \"\"hi\"\"\"\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == Row{"a,b", "line1\nline2", "say \"hi\""});
}

TEST_CASE("empty fields and empty quoted fields survive") {
  auto rows = csv::parse(",a,\n\"\",b\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == Row{"", "a", ""});
  CHECK(rows[1] == Row{"", "b"});
}

TEST_CASE("empty input yields no rows") {
  CHECK(csv::parse("").empty());
}

TEST_CASE("malformed quoting is rejected") {
  CHECK_THROWS_AS(csv::parse("\"unterminated"), DataError);
  CHECK_THROWS_AS(csv::parse("ab\"cd\n"), DataError);
  // Trailing text after a closing quote is accepted leniently, like most
  // permissive readers, by concatenation.
  CHECK(csv::parse("\"a\"tail\n")[0] == Row{"atail"});
}

TEST_CASE("alternate delimiters work") {
  auto rows = csv::parse("a\tb\tc\n", '\t');
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == Row{"a", "b", "c"});
  // With a tab delimiter a comma is plain content.
  CHECK(csv::parse("a,b\tc\n", '\t')[0] == Row{"a,b", "c"});
}

TEST_CASE("write quotes only fields that need it") {
  Row fields = {"plain", "with,comma", "with\"quote", "with\nnewline", ""};
  CHECK(csv::write_row(fields) ==
        "plain,\"with,comma\",\"with\"\"quote\",\"with\nnewline\",\n");
}

TEST_CASE("write emits one LF-terminated line per row") {
  Table rows = {{"id", "text"}, {"HS001", "hello"}};
  CHECK(csv::write(rows) == "id,text\nHS001,hello\n");
}

TEST_CASE("write then parse round-trips arbitrary fields") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Table rows;
    const std::size_t n_rows = 1 + rng.next_below(4);
    const std::size_t n_cols = 1 + rng.next_below(4);
    for (std::size_t r = 0; r < n_rows; ++r) {
      Row row;
      for (std::size_t c = 0; c < n_cols; ++c) row.push_back(random_field(rng));
      rows.push_back(std::move(row));
    }
    const std::string encoded = csv::write(rows);
    CAPTURE(trial);
    CAPTURE(encoded);
    CHECK(csv::parse(encoded) == rows);
  }
}

TEST_CASE("writing the same rows twice gives identical bytes") {
  Table rows = {{"id", "counterspeech"}, {"HS001", "a \"quoted\" reply, with commas"}};
  CHECK(csv::write(rows) == csv::write(rows));
}
