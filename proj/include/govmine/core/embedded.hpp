#pragma once

#include <string_view>

// Data files under data/ compiled into the library.
namespace govmine::embedded {

std::string_view bot_rules();
std::string_view source_extensions();
std::string_view stopwords();

}  // namespace govmine::embedded
