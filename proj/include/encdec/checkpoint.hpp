#pragma once

#include <string>
#include <string_view>

#include "encdec/parser.hpp"

namespace encdec {

inline constexpr std::string_view kCheckpointMagic = "ENCDEC-CHECKPOINT";
inline constexpr int kCheckpointVersion = 1;

// Binary layout, all integers little-endian:
//   magic, u32 version
//   u64 length + config text
//   u64 length + vocabulary text
//   u64 length + pretrained word list (one per line)
//   u32 count, then per parameter:
//     u32 name length, name, u8 trainable, u32 rank, u64 dims..., float32 values
std::string SerializeParser(const Parser& parser);
Parser DeserializeParser(std::string_view bytes);

void SaveCheckpoint(const std::string& path, const Parser& parser);
Parser LoadCheckpoint(const std::string& path);

}  // namespace encdec
