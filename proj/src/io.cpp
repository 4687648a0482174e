#include "pht/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pht::io {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(const std::string& in, size_t& pos) {
    if (pos + 4 > in.size()) throw CorruptData("truncated payload");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    pos += 4;
    return v;
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
    }
    std::filesystem::rename(tmp, path);
}

geom::EmbeddedComplex load_mesh_json(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw std::runtime_error("mesh parse error: " + std::string(e.what()));
    }
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw std::runtime_error("mesh is missing a vertices array");
    std::vector<std::array<double, 3>> vertices;
    int dim = 2;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() < 2 || v.size() > 3)
            throw std::runtime_error("vertex must have 2 or 3 coordinates");
        std::array<double, 3> p{0.0, 0.0, 0.0};
        for (size_t i = 0; i < v.size(); ++i) p[i] = v[i].get<double>();
        if (v.size() == 3 && p[2] != 0.0) dim = 3;
        vertices.push_back(p);
    }
    std::vector<std::vector<int>> simplices;
    if (j.contains("simplices")) {
        for (const auto& s : j["simplices"]) simplices.push_back(s.get<std::vector<int>>());
        for (const auto& s : simplices)
            if (static_cast<int>(s.size()) > 3) dim = 3;
    }
    std::string label = j.value("label", path.stem().string());
    return geom::EmbeddedComplex(dim, std::move(vertices), simplices, label);
}

geom::EmbeddedComplex load_mesh_off(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string tok;
    in >> tok;
    if (tok != "OFF") throw std::runtime_error("not an OFF file");
    long nv = 0, nf = 0, ne = 0;
    in >> nv >> nf >> ne;
    if (!in || nv <= 0) throw std::runtime_error("bad OFF header");
    std::vector<std::array<double, 3>> vertices(nv);
    for (long i = 0; i < nv; ++i) in >> vertices[i][0] >> vertices[i][1] >> vertices[i][2];
    std::vector<std::vector<int>> simplices;
    for (long f = 0; f < nf; ++f) {
        int arity = 0;
        in >> arity;
        if (!in || arity < 1 || arity > 4) throw std::runtime_error("OFF faces must be simplices");
        std::vector<int> s(arity);
        for (int i = 0; i < arity; ++i) in >> s[i];
        simplices.push_back(std::move(s));
    }
    if (!in) throw std::runtime_error("truncated OFF file");
    return geom::EmbeddedComplex(3, std::move(vertices), simplices, path.stem().string());
}

geom::EmbeddedComplex load_mesh(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".off" || ext == ".OFF") return load_mesh_off(path);
    return load_mesh_json(path);
}

void save_mesh_json(const std::filesystem::path& path, const geom::EmbeddedComplex& k) {
    json j;
    j["label"] = k.label();
    json verts = json::array();
    for (int i = 0; i < k.vertex_count(); ++i) {
        const auto& v = k.vertex(i);
        if (k.ambient_dim() == 2)
            verts.push_back({v[0], v[1]});
        else
            verts.push_back({v[0], v[1], v[2]});
    }
    j["vertices"] = verts;
    // Top-dimensional simplices are enough; faces are completed on load.
    json simplices = json::array();
    for (int id = 0; id < k.simplex_count(); ++id) {
        bool is_face_of_other = false;
        for (int other = 0; other < k.simplex_count() && !is_face_of_other; ++other)
            for (auto [face, sign] : k.faces_of(other)) {
                (void)sign;
                if (face == id) { is_face_of_other = true; break; }
            }
        if (!is_face_of_other) simplices.push_back(k.simplex(id));
    }
    j["simplices"] = simplices;
    atomic_write(path, j.dump(2) + "\n");
}

void save_diagram(const std::filesystem::path& manifest_path, const kan::VectDiagram& d,
                  uint64_t seed, const std::string& mesh_ref) {
    const auto& g = d.grid();
    json j;
    j["format"] = "pht-diagram";
    j["version"] = 1;
    j["seed"] = seed;
    j["mesh"] = mesh_ref;
    j["field"] = d.prime();
    j["degree"] = d.degree();
    j["coords"] = geom::to_string(g.coords);
    j["metric"] = geom::to_string(g.metric());
    json dirs = json::array();
    for (const auto& v : g.directions.directions()) {
        if (v.ambient_dim() == 2)
            dirs.push_back({v.x(), v.y()});
        else
            dirs.push_back({v.x(), v.y(), v.z()});
    }
    j["directions"] = dirs;
    j["parameters"] = g.params;
    j["dimensions"] = d.dims();
    json arrows = json::array();
    std::string payload;
    payload.reserve(1 << 16);
    put_u32(payload, 0x4d544850u);  // "PHTM"
    put_u32(payload, static_cast<uint32_t>(d.generators().size()));
    for (size_t i = 0; i < d.generators().size(); ++i) {
        const auto& [p, q] = d.generators()[i];
        const auto& m = d.generator_arrows()[i];
        arrows.push_back({{"src", p}, {"dst", q}, {"rank", linalg::rank(m)}});
        put_u32(payload, static_cast<uint32_t>(m.rows()));
        put_u32(payload, static_cast<uint32_t>(m.cols()));
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) payload.push_back(static_cast<char>(m.at(r, c)));
    }
    j["arrows"] = arrows;
    auto payload_path = manifest_path;
    payload_path.replace_extension(".bin");
    j["payload"] = payload_path.filename().string();
    atomic_write(manifest_path, j.dump(2) + "\n");
    atomic_write(payload_path, payload);
}

kan::VectDiagram load_diagram(const std::filesystem::path& manifest_path) {
    json j;
    try {
        j = json::parse(read_file(manifest_path));
    } catch (const std::exception& e) {
        throw CorruptData("manifest parse error: " + std::string(e.what()));
    }
    try {
        if (j.value("format", "") != "pht-diagram") throw CorruptData("not a diagram manifest");
        geom::Coords coords = geom::coords_from_string(j.at("coords").get<std::string>());
        uint32_t prime = j.at("field").get<uint32_t>();
        int degree = j.at("degree").get<int>();
        std::vector<geom::Direction> dirs;
        for (const auto& v : j.at("directions")) {
            if (v.size() == 2)
                dirs.emplace_back(v[0].get<double>(), v[1].get<double>());
            else
                dirs.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
        }
        std::vector<double> params = j.at("parameters").get<std::vector<double>>();
        // The stored grid already contains sup X; the constructor re-checks.
        spacetime::SampleGrid grid(geom::DirectionSet(dirs, geom::metric_for(coords)), params,
                                   coords);
        if (grid.param_count() != static_cast<int>(params.size()))
            throw CorruptData("stored parameter grid is not canonical");
        std::vector<int> dims = j.at("dimensions").get<std::vector<int>>();

        auto payload_path = manifest_path.parent_path() / j.at("payload").get<std::string>();
        std::string payload;
        try {
            payload = read_file(payload_path);
        } catch (const std::exception& e) {
            throw CorruptData(e.what());
        }
        size_t pos = 0;
        if (get_u32(payload, pos) != 0x4d544850u) throw CorruptData("bad payload magic");
        uint32_t count = get_u32(payload, pos);
        if (count != j.at("arrows").size()) throw CorruptData("arrow count mismatch");
        std::vector<std::pair<int, int>> gens;
        std::vector<linalg::Matrix> arrows;
        for (uint32_t i = 0; i < count; ++i) {
            const auto& a = j.at("arrows")[i];
            gens.emplace_back(a.at("src").get<int>(), a.at("dst").get<int>());
            uint32_t rows = get_u32(payload, pos), cols = get_u32(payload, pos);
            linalg::Matrix m(static_cast<int>(rows), static_cast<int>(cols), prime);
            if (pos + static_cast<size_t>(rows) * cols > payload.size())
                throw CorruptData("truncated payload");
            for (uint32_t r = 0; r < rows; ++r)
                for (uint32_t c = 0; c < cols; ++c) {
                    uint32_t v = static_cast<unsigned char>(payload[pos++]);
                    if (v >= prime) throw CorruptData("entry outside field range");
                    m.set(static_cast<int>(r), static_cast<int>(c), v);
                }
            int expect_rank = a.at("rank").get<int>();
            if (linalg::rank(m) != expect_rank) throw CorruptData("arrow rank mismatch");
            arrows.push_back(std::move(m));
        }
        return kan::VectDiagram(grid, degree, prime, std::move(dims), std::move(gens),
                                std::move(arrows));
    } catch (const CorruptData&) {
        throw;
    } catch (const std::exception& e) {
        throw CorruptData("manifest field error: " + std::string(e.what()));
    }
}

void save_barcode_json(const std::filesystem::path& path, const bars::Barcode& b, uint64_t seed) {
    json j;
    j["coords"] = geom::to_string(b.coords);
    j["seed"] = seed;
    json arr = json::array();
    for (const auto& bar : b.bars)
        arr.push_back({{"birth", bar.birth}, {"death", bar.death}, {"cap", bar.reaches_cap}});
    j["bars"] = arr;
    atomic_write(path, j.dump(2) + "\n");
}

void save_barcode_csv(const std::filesystem::path& path, const bars::Barcode& b, uint64_t seed) {
    std::ostringstream out;
    out << "# seed=" << seed << " coords=" << geom::to_string(b.coords) << "\n";
    out << "birth,death,cap\n";
    out.precision(17);
    for (const auto& bar : b.bars)
        out << bar.birth << "," << bar.death << "," << (bar.reaches_cap ? 1 : 0) << "\n";
    atomic_write(path, out.str());
}

bars::Barcode load_barcode_json(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw CorruptData("barcode parse error: " + std::string(e.what()));
    }
    bars::Barcode b;
    try {
        b.coords = geom::coords_from_string(j.at("coords").get<std::string>());
        for (const auto& bar : j.at("bars")) {
            bars::Bar nb;
            nb.birth = bar.at("birth").get<double>();
            nb.death = bar.at("death").get<double>();
            nb.reaches_cap = bar.at("cap").get<bool>();
            b.bars.push_back(nb);
        }
    } catch (const std::exception& e) {
        throw CorruptData("barcode field error: " + std::string(e.what()));
    }
    return b;
}

void save_plot_csv(const std::filesystem::path& path,
                   const std::vector<std::pair<double, bars::Barcode>>& per_direction,
                   uint64_t seed) {
    std::ostringstream out;
    out << "# seed=" << seed << "\n";
    out << "direction_angle,birth,death\n";
    out.precision(17);
    for (const auto& [angle, code] : per_direction)
        for (const auto& bar : code.bars) out << angle << "," << bar.birth << "," << bar.death << "\n";
    atomic_write(path, out.str());
}

void save_reports_json(const std::filesystem::path& path,
                       const std::vector<bounds::BoundReport>& reports, uint64_t seed) {
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back({{"name", r.name},
                       {"measured", r.measured},
                       {"bound", r.bound},
                       {"slack", r.slack},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass},
                       {"context", r.context}});
    }
    json j;
    j["seed"] = seed;
    j["reports"] = arr;
    atomic_write(path, j.dump(2) + "\n");
}

void save_reports_csv(const std::filesystem::path& path,
                      const std::vector<bounds::BoundReport>& reports, uint64_t seed) {
    std::ostringstream out;
    out << "# seed=" << seed << "\n";
    out << "name,measured,bound,slack,pass\n";
    out.precision(17);
    for (const auto& r : reports)
        out << r.name << "," << r.measured << "," << r.bound << "," << r.slack << ","
            << (r.pass ? 1 : 0) << "\n";
    atomic_write(path, out.str());
}

}  // namespace pht::io
