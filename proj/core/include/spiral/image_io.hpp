#pragma once

#include <filesystem>

#include "spiral/signal.hpp"

namespace spiral {

enum class PgmEncoding { kAscii /* P2 */, kBinary /* P5 */ };

// Reads P2 or P5 (8- or 16-bit). Gray levels are multiplied by the scale in
// the sidecar file `<path>.scale.txt` when one exists.
Signal read_pgm(const std::filesystem::path& path);

// Max-scales `image` onto [0, max_gray], clipping negatives to 0, and records
// the physical value of one gray level in `<path>.scale.txt`. Returns that
// scale.
double write_pgm(const std::filesystem::path& path, const Signal& image,
                 PgmEncoding encoding = PgmEncoding::kBinary, int max_gray = 65535);

std::filesystem::path pgm_sidecar_path(const std::filesystem::path& path);

// Comma-separated row-major values, one image row per line.
Signal read_csv_image(const std::filesystem::path& path);
void write_csv_image(const std::filesystem::path& path, const Signal& image);

// Dispatches on extension: .pgm or .csv.
Signal read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const Signal& image);

}  // namespace spiral
