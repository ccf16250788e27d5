#include <doctest.h>
#include <httplib.h>

#include <random>
#include <thread>

#include "colorlit/corpus.hpp"
#include "colorlit/error.hpp"
#include "colorlit/text.hpp"
#include "support.hpp"

using namespace colorlit;
using test_support::fixture;
using test_support::TempDir;

namespace {

// Serves GET requests from a handler on a random localhost port.
class StubServer {
 public:
  explicit StubServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Get(".*", [this, handler](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mu_);
        paths_.push_back(req.path);
      }
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string base() const { return "http://127.0.0.1:" + std::to_string(port_); }
  std::vector<std::string> paths() {
    std::lock_guard lock(mu_);
    return paths_;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mu_;
  std::vector<std::string> paths_;
};

}  // namespace

TEST_CASE("catalog row maps onto a WorkRecord") {
  const auto works = corpus::parse_catalog(
      "work_id,gutenberg_id,author,title,year\npride,1342,Jane Austen,Pride and Prejudice,1813\n");
  REQUIRE(works.size() == 1);
  CHECK(works[0].work_id == "pride");
  CHECK(works[0].gutenberg_id == 1342);
  CHECK(works[0].author == "Jane Austen");
  CHECK(works[0].title == "Pride and Prejudice");
  CHECK(works[0].year == 1813);
  CHECK(works[0].token_count == 0);
}

TEST_CASE("catalog with only a header is empty") {
  CHECK(corpus::parse_catalog("work_id,gutenberg_id,author,title,year\n").empty());
}

TEST_CASE("duplicate work_id names the offending row") {
  const std::string csv =
      "work_id,gutenberg_id,author,title,year\n"
      "pride,1342,Jane Austen,Pride and Prejudice,1813\n"
      "pride,1343,Jane Austen,Other,1814\n";
  try {
    corpus::parse_catalog(csv);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(text::contains(e.what(), "row 3"));
    CHECK(text::contains(e.what(), "pride"));
  }
}

TEST_CASE("catalog validation errors carry row numbers") {
  const std::string header = "work_id,gutenberg_id,author,title,year\n";
  auto error_of = [&](const std::string& body) -> std::string {
    try {
      corpus::parse_catalog(header + body);
    } catch (const DataError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(text::contains(error_of("a,1,X,T\n"), "row 2"));
  CHECK(text::contains(error_of("a,1,X,T,1800\nb,2,Y,U,eighteen\n"), "row 3"));
  CHECK(text::contains(error_of("a,1,X,T,999\n"), "row 2"));
  CHECK(text::contains(error_of("a,0,X,T,1800\n"), "row 2"));
  CHECK(text::contains(error_of("a,1,X,T,1800,extra\n"), "row 2"));
  CHECK_THROWS_AS(corpus::parse_catalog("id,gid,author,title,year\n"), DataError);
  CHECK_THROWS_AS(corpus::parse_catalog(""), DataError);
}

TEST_CASE("catalog round trips through serialize") {
  std::vector<WorkRecord> works = {
      {"pride", 1342, "Jane Austen", "Pride and Prejudice", 1813, 0},
      {"quoted", 7, "Doe, John", "A \"Quoted\" Title", 1901, 0},
      {"multi", 8, "Roe", "Line\nBreak", 1750, 0},
  };
  const auto text1 = corpus::serialize_catalog(works);
  const auto parsed = corpus::parse_catalog(text1);
  CHECK(parsed == works);
  CHECK(corpus::serialize_catalog(parsed) == text1);

  const auto desk = corpus::load_catalog(fixture("desk/catalog.csv"));
  CHECK(desk.size() == 5);
  CHECK(corpus::parse_catalog(corpus::serialize_catalog(desk)) == desk);
}

TEST_CASE("missing catalog file is an I/O error") {
  CHECK_THROWS_AS(corpus::load_catalog("/nonexistent/catalog.csv"), IoError);
}

TEST_CASE("token counts sidecar round trip") {
  TempDir dir;
  auto works = corpus::load_catalog(fixture("desk/catalog.csv"));
  for (std::size_t i = 0; i < works.size(); ++i) works[i].token_count = static_cast<std::int64_t>(10 * (i + 1));
  corpus::write_token_counts(dir.str("counts.csv"), works);
  auto fresh = corpus::load_catalog(fixture("desk/catalog.csv"));
  corpus::apply_token_counts(dir.str("counts.csv"), fresh);
  CHECK(fresh == works);
}

TEST_CASE("gutenberg URL patterns") {
  const auto urls = corpus::gutenberg_urls(1342, "https://www.gutenberg.org");
  REQUIRE(urls.size() == 2);
  CHECK(urls[0] == "https://www.gutenberg.org/files/1342/1342-0.txt");
  CHECK(urls[1] == "https://www.gutenberg.org/cache/epub/1342/pg1342.txt");
  CHECK(corpus::gutenberg_urls(5, "http://m/")[0] == "http://m/files/5/5-0.txt");
  CHECK_THROWS_AS(corpus::gutenberg_urls(0, "https://www.gutenberg.org"), DataError);
  CHECK_THROWS_AS(corpus::fetch_text(0, "https://www.gutenberg.org"), DataError);
}

TEST_CASE("fetch reports both URLs when both patterns fail") {
  StubServer server([](const httplib::Request&, httplib::Response& res) { res.status = 404; });
  try {
    corpus::fetch_text(1342, server.base());
    FAIL("expected FetchError");
  } catch (const FetchError& e) {
    const std::string msg = e.what();
    CHECK(text::contains(msg, server.base() + "/files/1342/1342-0.txt"));
    CHECK(text::contains(msg, server.base() + "/cache/epub/1342/pg1342.txt"));
    CHECK(text::contains(msg, "404"));
  }
  // One attempt per pattern, in order.
  const auto paths = server.paths();
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == "/files/1342/1342-0.txt");
  CHECK(paths[1] == "/cache/epub/1342/pg1342.txt");
}

TEST_CASE("fetch falls back to the second pattern and repairs bad UTF-8") {
  StubServer server([](const httplib::Request& req, httplib::Response& res) {
    if (req.path == "/cache/epub/77/pg77.txt") {
      res.set_content(std::string("caf\xc3\xa9 \xff end"), "text/plain");
    } else {
      res.status = 404;
    }
  });
  const auto body = corpus::fetch_text(77, server.base());
  CHECK(body == "caf\xc3\xa9 \xef\xbf\xbd end");
}

TEST_CASE("boilerplate stripping") {
  SUBCASE("marker slicing") {
    const auto out = corpus::clean_gutenberg_text("hdr\n*** START OF X ***\nbody\n*** END OF X ***\nftr");
    CHECK(out.text == "body");
    CHECK(out.markers_found);
  }
  SUBCASE("no markers pass through") {
    const std::string raw = "just\ntext\n";
    const auto out = corpus::clean_gutenberg_text(raw);
    CHECK(out.text == raw);
    CHECK_FALSE(out.markers_found);
  }
  SUBCASE("START without END passes through") {
    const std::string raw = "*** START OF X ***\nbody\n";
    const auto out = corpus::clean_gutenberg_text(raw);
    CHECK(out.text == raw);
    CHECK_FALSE(out.markers_found);
  }
  SUBCASE("END before START is malformed") {
    CHECK_THROWS_AS(corpus::clean_gutenberg_text("*** END OF X ***\n*** START OF X ***\nbody\n*** END OF X ***"),
                    DataError);
  }
  SUBCASE("CRLF input") {
    const auto out =
        corpus::clean_gutenberg_text("h\r\n*** START OF X ***\r\nline one\r\nline two\r\n*** END OF X ***\r\n");
    CHECK(out.text == "line one\nline two");
  }
  SUBCASE("empty body") {
    const auto out = corpus::clean_gutenberg_text("*** START OF X ***\n*** END OF X ***\n");
    CHECK(out.text.empty());
    CHECK(out.markers_found);
  }
  SUBCASE("desk fixture text") {
    const auto raw = text::read_file(fixture("desk/texts/90001.txt"));
    const auto out = corpus::clean_gutenberg_text(raw);
    CHECK(out.markers_found);
    CHECK(out.text.rfind("The red rose appeared .", 0) == 0);
    CHECK_FALSE(text::contains(out.text, "Project Gutenberg"));
  }
}

TEST_CASE("clean_gutenberg_text is idempotent on random inputs") {
  const std::vector<std::string> pool = {
      "*** START OF THE BOOK ***", "*** END OF THE BOOK ***", "plain line", "", "\r", "a *** START OF b",
      "x*** END OF", "text with \xc3\xa9", "   ",
  };
  std::mt19937_64 gen(7);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string raw;
    const int lines = static_cast<int>(gen() % 9);
    for (int i = 0; i < lines; ++i) {
      raw += pool[gen() % pool.size()];
      if (i + 1 < lines || gen() % 2) raw += '\n';
    }
    corpus::CleanedText once;
    try {
      once = corpus::clean_gutenberg_text(raw);
    } catch (const DataError&) {
      continue;
    }
    const auto twice = corpus::clean_gutenberg_text(once.text);
    CHECK(twice.text == once.text);
    ++checked;
  }
  CHECK(checked > 500);
}
