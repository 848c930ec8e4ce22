#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 text helpers backed by ICU. Invalid UTF-8 sequences are replaced
// with U+FFFD before processing.
namespace brandmatch::unicode {

/// Full Unicode case folding followed by NFC normalization.
std::string fold_case(std::string_view text);

std::string nfc(std::string_view text);

/// Strips leading/trailing Unicode whitespace.
std::string trim(std::string_view text);

/// Trims and collapses internal whitespace runs to a single ASCII space.
std::string collapse_whitespace(std::string_view text);

std::size_t code_points(std::string_view text);

/// Word segmentation (ICU word boundaries), case folded and NFC normalized.
/// Segments are further split at any internal punctuation (so "l'amore"
/// yields "l" and "amore"); pieces without at least one letter are dropped.
std::vector<std::string> words(std::string_view text);

}  // namespace brandmatch::unicode
