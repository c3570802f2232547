#pragma once

namespace bsom {

inline constexpr const char* kToolName = "bsom";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kMapFormatVersion = 1;
inline constexpr int kPartitionFormatVersion = 1;

}  // namespace bsom
