#include "doctest.h"
#include "pht/io.hpp"

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "support.hpp"

using namespace pht;
using support::kPi;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pht_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("mesh json round trip with face completion") {
    TempDir tmp;
    auto disk = geom::regular_disk_mesh(16);
    auto path = tmp.path / "disk.json";
    io::save_mesh_json(path, disk);
    auto loaded = io::load_mesh(path);
    CHECK(loaded.vertex_count() == disk.vertex_count());
    CHECK(loaded.count_of_dim(0) == disk.count_of_dim(0));
    CHECK(loaded.count_of_dim(1) == disk.count_of_dim(1));
    CHECK(loaded.count_of_dim(2) == disk.count_of_dim(2));

    io::atomic_write(tmp.path / "tri.json",
                     "{\"vertices\": [[0,0],[1,0],[0,1]], \"simplices\": [[0,1,2]]}\n");
    auto tri = io::load_mesh(tmp.path / "tri.json");
    CHECK(tri.count_of_dim(1) == 3);  // edges completed on load

    io::atomic_write(tmp.path / "empty.json", "{\"vertices\": [], \"simplices\": []}\n");
    CHECK_THROWS_WITH_AS(io::load_mesh(tmp.path / "empty.json"), "empty shape",
                         std::invalid_argument);
    io::atomic_write(tmp.path / "bad.json", "{not json\n");
    CHECK_THROWS(io::load_mesh(tmp.path / "bad.json"));
}

TEST_CASE("off ingestion expands faces") {
    TempDir tmp;
    io::atomic_write(tmp.path / "tet.off",
                     "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
                     "3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n");
    auto tet = io::load_mesh(tmp.path / "tet.off");
    CHECK(tet.ambient_dim() == 3);
    CHECK(tet.count_of_dim(0) == 4);
    CHECK(tet.count_of_dim(1) == 6);
    CHECK(tet.count_of_dim(2) == 4);
    io::atomic_write(tmp.path / "bad.off", "NOT_OFF\n");
    CHECK_THROWS(io::load_mesh(tmp.path / "bad.off"));
}

TEST_CASE("diagram persistence round trip") {
    TempDir tmp;
    linalg::Field f2(2);
    auto disk = geom::regular_disk_mesh(32);
    auto hex = geom::generate_net(6, 2, geom::SphereMetric::geodesic);
    std::vector<double> t;
    for (int k = 0; k <= 6; ++k) t.push_back(-kPi + k * kPi / 6.0);
    spacetime::SampleGrid grid(hex, t, geom::Coords::theta);
    auto d = kan::sample_pht(disk, grid, 0, f2, 2);

    auto manifest = tmp.path / "diagram_h0.json";
    io::save_diagram(manifest, d, 42, "disk32");
    auto loaded = io::load_diagram(manifest);
    CHECK(loaded.degree() == 0);
    CHECK(loaded.prime() == 2);
    CHECK(loaded.dims() == d.dims());
    REQUIRE(loaded.generators().size() == d.generators().size());
    for (size_t i = 0; i < d.generators().size(); ++i) {
        CHECK(loaded.generators()[i] == d.generators()[i]);
        CHECK(loaded.generator_arrows()[i] == d.generator_arrows()[i]);
    }
    // Kan values computed from the reloaded diagram agree.
    auto w = geom::Direction::from_angle(kPi / 2.0);
    auto cone = spacetime::past_light_cone({w, -kPi / 6.0, -1}, loaded.grid());
    CHECK(kan::colimit(cone, loaded).dim == 1);

    // Corruptions are detected.
    auto payload = tmp.path / "diagram_h0.bin";
    {
        std::ifstream in(payload, std::ios::binary);
        std::string data((std::istreambuf_iterator<char>(in)), {});
        data.resize(data.size() / 2);
        io::atomic_write(payload, data);
    }
    CHECK_THROWS_AS(io::load_diagram(manifest), io::CorruptData);
    io::atomic_write(tmp.path / "nonsense.json", "{\"format\": \"other\"}\n");
    CHECK_THROWS_AS(io::load_diagram(tmp.path / "nonsense.json"), io::CorruptData);
}

TEST_CASE("barcode files") {
    TempDir tmp;
    bars::Barcode code;
    code.coords = geom::Coords::theta;
    code.bars.push_back({-kPi, 0.0, true});
    code.bars.push_back({-2.0, -1.0, false});
    io::save_barcode_json(tmp.path / "b.json", code, 7);
    auto loaded = io::load_barcode_json(tmp.path / "b.json");
    CHECK(loaded.coords == code.coords);
    REQUIRE(loaded.bars.size() == 2);
    CHECK(loaded.bars[0].birth == code.bars[0].birth);
    CHECK(loaded.bars[1].death == code.bars[1].death);
    CHECK(loaded.bars[0].reaches_cap);

    io::save_barcode_csv(tmp.path / "b.csv", code, 7);
    std::ifstream csv(tmp.path / "b.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line.find("seed=7") != std::string::npos);
    std::getline(csv, line);
    CHECK(line == "birth,death,cap");

    io::atomic_write(tmp.path / "bad.json", "[1,2,3]\n");
    CHECK_THROWS_AS(io::load_barcode_json(tmp.path / "bad.json"), io::CorruptData);
}

TEST_CASE("report files") {
    TempDir tmp;
    std::vector<bounds::BoundReport> reports;
    reports.push_back(bounds::make_report("demo", 0.5, 1.0, 0.01, "ctx"));
    io::save_reports_json(tmp.path / "r.json", reports, 3);
    io::save_reports_csv(tmp.path / "r.csv", reports, 3);
    CHECK(fs::exists(tmp.path / "r.json"));
    CHECK(fs::exists(tmp.path / "r.csv"));
    // No temp files left behind.
    for (const auto& entry : fs::directory_iterator(tmp.path))
        CHECK(entry.path().extension() != ".tmp");
}

TEST_SUITE_END();
