#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dagmt {

// Decodes UTF-8 into codepoints; invalid bytes decode as U+FFFD.
std::vector<char32_t> utf8_decode(const std::string& s);

void utf8_append(std::string& out, char32_t cp);
std::string utf8_encode(char32_t cp);

// Characters of scripts conventionally written without spaces (Han, kana,
// Hangul). Used for per-character tokenization fallbacks.
bool is_space_free_script_char(char32_t cp);

bool is_cjk_punctuation(char32_t cp);

}  // namespace dagmt
