#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pht/barcodes.hpp"
#include "pht/bounds.hpp"
#include "pht/geometry.hpp"
#include "pht/kan.hpp"

namespace pht::io {

// Raised on unreadable or inconsistent persisted data (exit code 3 territory).
struct CorruptData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mesh ingestion: JSON {"vertices": [[x,y,(z)],...], "simplices": [[i,...],...]}
// or OFF (triangles expanded to edges and vertices). Faces are completed on
// load either way.
geom::EmbeddedComplex load_mesh_json(const std::filesystem::path& path);
geom::EmbeddedComplex load_mesh_off(const std::filesystem::path& path);
geom::EmbeddedComplex load_mesh(const std::filesystem::path& path);
void save_mesh_json(const std::filesystem::path& path, const geom::EmbeddedComplex& k);

// Diagram persistence: a JSON manifest (grid, dimensions, arrow ranks) plus a
// little-endian binary payload with the arrow matrices.
void save_diagram(const std::filesystem::path& manifest_path, const kan::VectDiagram& d,
                  uint64_t seed, const std::string& mesh_ref);
kan::VectDiagram load_diagram(const std::filesystem::path& manifest_path);

void save_barcode_json(const std::filesystem::path& path, const bars::Barcode& b, uint64_t seed);
void save_barcode_csv(const std::filesystem::path& path, const bars::Barcode& b, uint64_t seed);
bars::Barcode load_barcode_json(const std::filesystem::path& path);

// Plot data: one (direction_angle, birth, death) row per bar.
void save_plot_csv(const std::filesystem::path& path,
                   const std::vector<std::pair<double, bars::Barcode>>& per_direction,
                   uint64_t seed);

void save_reports_json(const std::filesystem::path& path,
                       const std::vector<bounds::BoundReport>& reports, uint64_t seed);
void save_reports_csv(const std::filesystem::path& path,
                      const std::vector<bounds::BoundReport>& reports, uint64_t seed);

// Write-to-temp-then-rename.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

}  // namespace pht::io
