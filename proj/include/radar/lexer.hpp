#pragma once

#include <string_view>
#include <vector>

#include "radar/token.hpp"

namespace radar {

// Tokenizes a whole model source. The trailing End token is always present.
// Throws LexError on illegal characters, malformed numbers and unterminated
// strings.
std::vector<Token> tokenize(std::string_view source);

}  // namespace radar
