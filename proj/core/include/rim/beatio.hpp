#pragma once

#include <string>

#include "rim/fmcw.hpp"

namespace rim {

/// Raw beat-matrix dump format: a fixed 32-byte header -- 8-byte magic
/// "RIMBEAT1", then K, N, n_max as little-endian uint64 -- followed by
/// K*(N - n_max) samples as interleaved little-endian float64 (re, im),
/// fast time varying fastest.
void write_beat(const BeatMatrix& beat, const std::string& path);

/// Reads samples and dimensions back; waveform metadata other than
/// (K, N, n_max) is not stored and comes back defaulted in `config`.
BeatMatrix read_beat(const std::string& path);

}  // namespace rim
