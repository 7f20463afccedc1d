#pragma once

#include <string>
#include <string_view>

namespace qfse {

/// Porter stem of a lowercase ASCII word. Other tokens are returned as-is.
std::string porter_stem(std::string_view word);

}  // namespace qfse
