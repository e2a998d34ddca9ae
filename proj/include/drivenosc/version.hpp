#pragma once

namespace drivenosc {

inline constexpr const char* kArtifactName = "drivenosc";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace drivenosc
