#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kidsim/pipeline.hpp"

namespace kidsim {

/// FNV-1a 64-bit over raw bytes; used to fingerprint exported artifacts in
/// the run manifest.
std::uint64_t fnv1a64(const std::string& bytes);

/// Per-tone DDC output as CSV: header "index,i,q", doubles printed with
/// enough digits to round-trip. LF line endings, deterministic bytes.
std::string ddc_csv(const FloatStream& stream);

/// Amplitude/phase PSD pair as CSV: "freq_hz,amp_psd_db,phase_psd_db".
std::string psd_csv(const SpectrumReport& amp, const SpectrumReport& phase);

struct ExportedFile {
    std::string relative_path;
    std::uint64_t content_hash = 0;
};

/// Write one file per tone (ddc + psd CSVs) plus manifest.json into out_dir.
/// The manifest echoes the configuration and lists every artifact with its
/// content hash. Returns the manifest path.
std::string export_run(const RunResult& result, const std::string& out_dir);

}  // namespace kidsim
