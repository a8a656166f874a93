#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace aladdin {

// Whole file as bytes. False if it cannot be opened or read.
bool read_file(const std::filesystem::path& path, std::string& out);

// True if `relative` is a relative path that does not climb above its base
// directory after lexical normalisation.
bool stays_inside(std::string_view relative);

}  // namespace aladdin
