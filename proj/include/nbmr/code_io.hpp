#pragma once

#include "nbmr/code.hpp"

#include <cstdint>
#include <string>

namespace nbmr {

struct CodeFile {
    RepCode code;
    PuncturePattern pattern;
};

// Line-oriented text format:
//   nbmr-code v1
//   m=<int> poly=0x<hex> N=<int> M=<int> dv=<int> dc=<int> T=<int> seed=<int>
//   e <c> <v> 0x<label>     one per edge, 0-based, sorted by (c, v)
//   r <t> <v> 0x<coef>      one per repetition coefficient, t in [1, T)
//   p <v>                   one per punctured position, sorted
//   crc32=0x<hex>           over all preceding bytes
std::string serialize_code(const RepCode& code, const PuncturePattern& pattern);

// CRC32 of the serialized file (the value on the trailing crc32= line).
std::uint32_t code_checksum(const RepCode& code, const PuncturePattern& pattern);

void save_code(const std::string& path, const RepCode& code,
               const PuncturePattern& pattern = {});

// Parses and validates (checksum, structure, invariants); the encoder is
// rebuilt from the edge list. Throws parse_error on malformed input.
CodeFile load_code(const std::string& path);
CodeFile parse_code(const std::string& text);

} // namespace nbmr
