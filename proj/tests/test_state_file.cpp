#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "qdiscord/state_file.hpp"

using namespace qdiscord;

TEST_SUITE("state_file") {

TEST_CASE("round trip is exact") {
  const auto rho = sample_random_state(std::vector<int>{2, 3}, 3, 17);
  std::stringstream s;
  write_state(s, rho, "a comment");
  const auto back = read_state(s);
  CHECK(back.labels() == rho.labels());
  CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("save and load through a file") {
  const auto path = std::filesystem::temp_directory_path() / "qdiscord_state_file_test.qstate";
  const auto rho = make_named_state("paper_cx_1p11");
  save_state(path, rho);
  const auto back = load_state(path);
  CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
  CHECK_THROWS(load_state(path));
}

TEST_CASE("malformed input") {
  std::istringstream wrong_version("qdiscord-state 9\nlabels A:2\nentries 0\n");
  CHECK_THROWS(read_state(wrong_version));
  std::istringstream truncated("qdiscord-state 1\nlabels A:2\nentries 2\n0 0 1 0\n");
  CHECK_THROWS(read_state(truncated));
  std::istringstream not_a_state("qdiscord-state 1\nlabels A:2\nentries 1\n0 0 2 0\n");
  CHECK_THROWS_AS(read_state(not_a_state), InvariantError);
}

TEST_CASE("comments and sparse entries") {
  std::istringstream in("# hand written\nqdiscord-state 1\nlabels A:2\n# diagonal\nentries 2\n0 0 0.25 0\n1 1 0.75 0\n");
  const auto rho = read_state(in);
  CHECK(rho.data()(1, 1).real() == doctest::Approx(0.75));
  CHECK(std::abs(rho.data()(0, 1)) == 0.0);
}

}
