#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tgi/io.hpp"
#include "tgi/problems.hpp"

using namespace tgi;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "tgi_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("tensor files round-trip bit for bit") {
    const auto d = random_tensor(TensorShape({2, 3}, {4}), 12);
    const auto path = scratch("r.tns");
    io::write_tensor_file(path, d);
    const auto back = io::read_tensor_file(path);
    CHECK(back == d);
    CHECK(io::tensor_to_text(back) == io::tensor_to_text(d));

    const DenseTensor v(TensorShape({3}, {}), {1.0, 2.0, 3.0});
    CHECK(io::tensor_from_text(io::tensor_to_text(v)) == v);
}

TEST_CASE("tensor parser diagnostics") {
    CHECK_THROWS_WITH_AS(io::tensor_from_text(R"({"row_modes":[2],"col_modes":[2],"entries":[[1,0],[2,0],[3,0]]})"),
                         doctest::Contains("'entries' has 3 items"), ParseError);
    CHECK_THROWS_WITH_AS(io::tensor_from_text(R"({"rows":[2],"col_modes":[2],"entries":[]})"),
                         doctest::Contains("'row_modes'"), ParseError);
    CHECK_THROWS_WITH_AS(io::tensor_from_text(R"({"row_modes":[2],"col_modes":[1],"entries":[[1,0],[2]]})"),
                         doctest::Contains("item 1"), ParseError);
    CHECK_THROWS_WITH_AS(io::tensor_from_text(R"({"row_modes":[0],"col_modes":[1],"entries":[]})"),
                         doctest::Contains("positive integer"), ParseError);
    CHECK_THROWS_AS(io::tensor_from_text("{not json"), ParseError);
    CHECK_THROWS_AS(io::read_tensor_file(scratch("missing.tns")), ParseError);
}

TEST_CASE("shipped fixture file parses to index three") {
    const auto d = io::read_tensor_file(std::filesystem::path(TGI_DATA_DIR) / "fixture.tns");
    CHECK(d == paper_fixture().d);
    CHECK(tensor_index(d) == 3);
}

TEST_CASE("CSV report has the fixed column order") {
    ResidualReport rep;
    rep.problem = "p";
    rep.order = "2x2";
    rep.index = 1;
    rep.nnz = 4;
    rep.repeats = 3;
    rep.seed = 7;
    rep.rows.push_back({InverseKind::MP, 1e-12, 0.5, 0.25});
    std::ostringstream out;
    io::write_report_csv(out, {rep});
    std::istringstream in(out.str());
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header == "problem,order,index,nnz,kind,residual,mean_time_s,repeats,seed");
    CHECK(line == "p,2x2,1,4,mp,1.000000e-12,7.500000e-01,3,7");
}

TEST_CASE("run config round-trips") {
    io::RunConfig cfg{"bench", "dirichlet:n=8:block=N1", {"mp", "cmp"}, {{"verify", 1e-10}}, 5, "out", 42};
    CHECK(io::config_from_text(io::config_to_text(cfg)) == cfg);
    CHECK_THROWS_AS(io::config_from_text("{}"), ParseError);
}

TEST_CASE("grid CSV and plot script") {
    DenseTensor g(TensorShape({2, 3}, {}), {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    const auto path = scratch("grid.csv");
    io::write_grid_csv(path, g);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "1,2,3");
    CHECK_THROWS_AS(io::write_grid_csv(path, DenseTensor(TensorShape({6}, {}))), ShapeMismatch);
    const auto script = scratch("plot.py");
    io::write_plot_script(script, {path}, {"mp"});
    CHECK(std::filesystem::file_size(script) > 0);
}
