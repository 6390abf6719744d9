#include <doctest.h>

#include <atomic>
#include <set>
#include <stdexcept>

#include "fixtures.hpp"
#include "thematic/error.hpp"
#include "thematic/util/csv.hpp"
#include "thematic/util/digest.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/parallel.hpp"
#include "thematic/util/random.hpp"
#include "thematic/util/text.hpp"

using namespace thematic;

TEST_CASE("sha256 matches published vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("fnv1a64 matches reference values") {
  static_assert(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("splitmix64 reference sequence") {
  std::uint64_t s = 1234567;
  CHECK(splitmix64(s) == 6457827717110365317ULL);
  CHECK(splitmix64(s) == 3203168211198807973ULL);
}

TEST_CASE("text helpers") {
  CHECK(text::trim("  a b \n") == "a b");
  CHECK(text::collapse_whitespace(" a \t\n b  ") == "a b");
  CHECK(text::iequals("List:", "list:"));
  std::string_view rest;
  CHECK(text::strip_prefix_ci("LIST: x", "list:", &rest));
  CHECK(rest == " x");
  CHECK_FALSE(text::strip_prefix_ci("Lis", "list:", &rest));
  CHECK(text::split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(text::word_count("  three  small words ") == 3);
  CHECK_THROWS_AS(text::read_file("/nonexistent/file"), ConfigError);
}

TEST_CASE("csv quoting round trip") {
  csv::Row row{"plain", "has,comma", "has \"quote\"", "multi\nline", ""};
  std::string line = csv::format_row(row);
  CHECK(line == "plain,\"has,comma\",\"has \"\"quote\"\"\",\"multi\nline\",\n");
  std::vector<std::size_t> lines;
  auto parsed = csv::parse("h1,h2,h3,h4,h5\r\n" + line + "x,y,z,w,v\n", &lines);
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[1] == row);
  CHECK(lines == std::vector<std::size_t>{1, 2, 4});
}

TEST_CASE("sample_indices is sorted, distinct, deterministic") {
  for (std::uint64_t seed : {0ULL, 7ULL, 99ULL}) {
    auto a = sample_indices(1000, 100, seed);
    CHECK(a == sample_indices(1000, 100, seed));
    CHECK(a.size() == 100);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 100);
    CHECK(a.back() < 1000);
  }
  CHECK(sample_indices(1000, 100, 1) != sample_indices(1000, 100, 2));
  auto all = sample_indices(5, 5, 3);
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("parallel_for visits each index once and rethrows the lowest failure") {
  std::vector<std::atomic<int>> hits(200);
  parallel_for(hits.size(), 8, [&](std::size_t i) { ++hits[i]; });
  for (auto& h : hits) CHECK(h.load() == 1);

  try {
    parallel_for(50, 1, [](std::size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "fail 7");
  }
}

TEST_CASE("atomic_write and json line io") {
  testing::TempDir dir;
  io::atomic_write(dir / "a.jsonl", io::jsonl({{{"x", 1}}, {{"x", 2}}}));
  auto rows = io::read_jsonl(dir / "a.jsonl");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1]["x"] == 2);
  io::atomic_write(dir / "b.json", "{not json");
  CHECK_THROWS_AS(io::read_json(dir / "b.json"), ValidationError);
  CHECK(io::dump(nlohmann::json("bad \xff byte")).find("\xef\xbf\xbd") != std::string::npos);
}
