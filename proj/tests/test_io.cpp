#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "caloronkit/io.hpp"

using namespace caloronkit;

TEST_CASE("grid descriptor round trip") {
  auto g = Grid::make({FactorSpec::circle(16), FactorSpec::interval(9, -1.0, 2.0),
                       FactorSpec::circle(32)},
                      2);
  auto g2 = grid_from_json(grid_to_json(*g));
  CHECK(g->same_as(*g2));

  auto s3 = Grid::make({FactorSpec::sphere3(8, 8, 8)});
  CHECK(s3->same_as(*grid_from_json(grid_to_json(*s3))));

  json bad = grid_to_json(*g);
  bad["factors"][0]["kind"] = "moebius";
  CHECK_THROWS(grid_from_json(bad));
}

TEST_CASE("compact grid spec strings") {
  auto g = parse_grid_spec("32x32x64s1");
  CHECK(g->dim() == 3);
  CHECK(g->has_fiber());
  CHECK(g->axis(2).n == 64);
  auto h = parse_grid_spec("i9:0:1xi9:0:1x24s1");
  CHECK(h->axis(0).kind == AxisKind::Interval);
  CHECK(h->has_fiber());
  auto s = parse_grid_spec("sph16:16:32");
  CHECK(s->dim() == 3);
  CHECK_THROWS(parse_grid_spec("x"));
}

TEST_CASE("form round trip") {
  auto g = Grid::make({FactorSpec::circle(8), FactorSpec::circle(16)}, 1);
  MatrixForm f = random_form(g, 1, 2, 301, 2, 0.7);
  MatrixForm f2 = form_from_json(form_to_json(f));
  CHECK(f2.degree() == 1);
  CHECK(f2.rank() == 2);
  CHECK(max_diff(f, f2) == 0.0);
}

TEST_CASE("group map round trip validates flags") {
  auto g = Grid::make({FactorSpec::circle(8), FactorSpec::circle(16)}, 1);
  GroupMap m = random_smooth_map(g, 2, 302, 2, 0.4, true, true);
  GroupMap m2 = map_from_json(map_to_json(m));
  CHECK(m2.unitary());
  CHECK(m2.based());
  CHECK(m.values() == m2.values());

  json j = map_to_json(m);
  j["values"][0][0] = 100.0;  // break unitarity; the flag check must fire
  CHECK_THROWS(map_from_json(j));
}

TEST_CASE("pair and framed-connection round trips") {
  auto g = Grid::make({FactorSpec::circle(8), FactorSpec::circle(16)}, 1);
  ConnectionPair p = random_pair(g, 2, 303, 2, 0.4, true);
  ConnectionPair p2 = pair_from_json(pair_to_json(p));
  CHECK(max_diff(p.A, p2.A) == 0.0);
  CHECK(max_diff(p.Phi, p2.Phi) == 0.0);
  CHECK(p2.unitary);

  FramedConnection fc = caloron_transform(p);
  FramedConnection fc2 = framed_from_json(framed_to_json(fc));
  CHECK(max_diff(fc.a, fc2.a) == 0.0);

  json j = pair_to_json(p);
  j["A"]["coeffs"]["0"][0][0] = 5.0;  // basedness violated at theta = 0
  CHECK_THROWS(pair_from_json(j));
}

TEST_CASE("graded form round trip") {
  auto g = Grid::make({FactorSpec::circle(8), FactorSpec::circle(16)}, 1);
  ConnectionPair p = random_pair(g, 2, 304, 2, 0.4, true);
  GradedForm s = string_form(p, 2);
  GradedForm s2 = graded_from_json(graded_to_json(s));
  CHECK(s2.parity == Parity::Odd);
  CHECK(graded_max_diff(s, s2) == 0.0);
}

TEST_CASE("equivalence report schema") {
  auto g = Grid::make({FactorSpec::circle(12), FactorSpec::circle(12), FactorSpec::circle(16)}, 2);
  ConnectionPair p = random_pair(g, 1, 305, 2, 0.3, true);
  EquivalenceReport rep = string_data_equivalent(p, p, 2, 1e-7);
  json j = report_to_json(rep);
  CHECK(j.at("verdict").get<std::string>() == "equivalent");
  CHECK(j.at("schema_version").get<int>() == 1);
  CHECK(j.at("per_degree").is_array());
  CHECK(j.at("per_degree")[0].contains("closedness"));
  CHECK(j.at("per_degree")[0].contains("worst_period"));
  CHECK(j.at("per_degree")[0].contains("cycle"));
  CHECK(j.at("params").contains("cutoff"));
  CHECK(j.at("params").contains("tol"));
  CHECK(j.at("params").contains("grid"));
}

TEST_CASE("atomic file write and read") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "caloronkit_io_test";
  fs::create_directories(dir);
  std::string path = (dir / "grid.json").string();
  auto g = Grid::make({FactorSpec::circle(12)});
  write_json_file(path, grid_to_json(*g));
  CHECK(!fs::exists(path + ".tmp"));
  auto g2 = grid_from_json(read_json_file(path));
  CHECK(g->same_as(*g2));
  CHECK_THROWS(read_json_file((dir / "missing.json").string()));
  fs::remove_all(dir);
}
