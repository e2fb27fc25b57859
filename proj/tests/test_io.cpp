#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "rostop/error.hpp"
#include "rostop/io.hpp"
#include "rostop/testing/oracles.hpp"

using namespace rostop;

namespace {

const std::string fixture_dir = ROSTOP_FIXTURE_DIR;

ErrorKind kind_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::budget;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("path CSV round trip keeps every bit")
{
  std::mt19937_64 rng(12);
  std::normal_distribution<double> z(0.0, 1e3);
  PathTensor x(7, 4, 3);
  for (auto& v : x.values()) { v = z(rng); }
  x.at(0, 0, 0) = 0.1;
  x.at(0, 0, 1) = std::numeric_limits<double>::denorm_min();
  std::stringstream s;
  write_paths_csv(s, x);
  CHECK(read_paths_csv(s) == x);
}

TEST_CASE("reward and sigma CSV round trip")
{
  RewardMatrix g(2, 3, {1.5, 0, 2, 3, 4, 1.0 / 3.0});
  std::stringstream s;
  write_rewards_csv(s, g);
  CHECK(read_rewards_csv(s) == g);

  SigmaPolicy sigma{{0, 2, 1}};
  std::stringstream t;
  write_sigma_csv(t, sigma);
  CHECK(t.str() == "path_id,sigma\n1,1\n2,3\n3,2\n");
  CHECK(read_sigma_csv(t) == sigma);
}

TEST_CASE("CSV parsing details")
{
  SUBCASE("byte order mark, CRLF and shuffled rows")
  {
    std::istringstream in("\xEF\xBB\xBFpath_id,t,reward\r\n2,1,5\r\n1,1,3\r\n");
    const auto g = read_rewards_csv(in);
    CHECK(g.at(0, 0) == 3.0);
    CHECK(g.at(1, 0) == 5.0);
  }
  SUBCASE("missing header")
  {
    std::istringstream in("1,1,3\n");
    CHECK(kind_of([&] { read_rewards_csv(in); }) == ErrorKind::io);
  }
  SUBCASE("locale-style decimal comma")
  {
    std::istringstream in("path_id,t,reward\n1,1,\"3,5\"\n");
    CHECK(kind_of([&] { read_rewards_csv(in); }) == ErrorKind::io);
  }
  SUBCASE("missing cell in the table")
  {
    std::istringstream in("path_id,t,reward\n1,1,3\n2,2,4\n");
    CHECK(kind_of([&] { read_rewards_csv(in); }) == ErrorKind::shape);
  }
  SUBCASE("zero index")
  {
    std::istringstream in("path_id,sigma\n0,1\n");
    CHECK(kind_of([&] { read_sigma_csv(in); }) == ErrorKind::io);
  }
}

TEST_CASE("binary instance round trip")
{
  const auto inst = testing::two_path_instance();
  std::stringstream s;
  write_instance(s, inst);
  const auto back = read_instance(s);
  CHECK(back.states() == inst.states());
  CHECK(back.rewards() == inst.rewards());
  CHECK(back.epsilon() == inst.epsilon());
  CHECK_FALSE(back.intersects(0, 1, 0));
  CHECK(back.intersects(0, 1, 1));

  std::istringstream bad("NOTANINSTANCE");
  CHECK(kind_of([&] { read_instance(bad); }) == ErrorKind::io);

  std::string bytes = s.str();
  bytes[7] = 9;  // unknown version
  std::istringstream wrong_version(bytes);
  CHECK(kind_of([&] { read_instance(wrong_version); }) == ErrorKind::io);

  std::istringstream truncated(s.str().substr(0, 40));
  CHECK(kind_of([&] { read_instance(truncated); }) == ErrorKind::io);
}

TEST_CASE("bundled fixtures")
{
  auto paths_in = open_input(fixture_dir + "/two_path_paths.csv");
  auto rewards_in = open_input(fixture_dir + "/two_path_rewards.csv");
  const auto x = read_paths_csv(paths_in);
  const auto g = read_rewards_csv(rewards_in);
  CHECK(x == testing::two_path_states());
  auto bin = open_input(fixture_dir + "/two_path.bin", true);
  const auto inst = read_instance(bin);
  CHECK(inst.states() == x);
  CHECK(inst.rewards() == g);
  CHECK(inst.epsilon() == 2.0);
  std::ostringstream again;
  write_instance(again, inst);
  std::ifstream original(fixture_dir + "/two_path.bin", std::ios::binary);
  std::stringstream bytes;
  bytes << original.rdbuf();
  CHECK(again.str() == bytes.str());

  CHECK(kind_of([] { open_input("/nonexistent/file.csv"); }) == ErrorKind::io);
}

TEST_CASE("key-value files")
{
  std::istringstream in("# comment\nprocess = bump\n\nT=50   # trailing\n delta =5\n");
  const auto kv = parse_key_values(in);
  CHECK(kv.size() == 3);
  CHECK(kv.at("process") == "bump");
  CHECK(kv.at("T") == "50");
  CHECK(kv.at("delta") == "5");

  std::istringstream dup("a=1\na=2\n");
  CHECK(kind_of([&] { parse_key_values(dup); }) == ErrorKind::configuration);
  std::istringstream junk("just text\n");
  CHECK(kind_of([&] { parse_key_values(junk); }) != ErrorKind::budget);
}

TEST_CASE("number parsing")
{
  CHECK(parse_real("0.25", "x") == 0.25);
  CHECK(parse_real("-1e-3", "x") == -1e-3);
  CHECK(kind_of([] { parse_real("abc", "x"); }) != ErrorKind::budget);
  CHECK(kind_of([] { parse_real("1.0x", "x"); }) != ErrorKind::budget);
  CHECK(parse_count("1e3", "n") == 1000);
  CHECK(parse_count("42", "n") == 42);
  CHECK(kind_of([] { parse_count("-1", "n"); }) != ErrorKind::budget);
  CHECK(kind_of([] { parse_count("1.5", "n"); }) != ErrorKind::budget);
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(parse_real(format_real(1.0 / 3.0), "x") == 1.0 / 3.0);
}
