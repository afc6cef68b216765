#pragma once

#include <string>
#include <string_view>

namespace coocnet {

/// Porter stemming algorithm (1980), all five steps as originally published.
/// Expects a lowercase word; words shorter than three letters pass through.
std::string porter_stem(std::string_view word);

} // namespace coocnet
