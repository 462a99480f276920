#pragma once

#include <optional>
#include <string_view>

#include "convbrowse/html.hpp"

namespace convbrowse {

// Coarse page region a link sits in, from its nearest landmark ancestor.
enum class Region { Header, Nav, Main, Footer, Aside, Other };

inline constexpr Region kAllRegions[] = {Region::Header, Region::Nav,   Region::Main,
                                         Region::Footer, Region::Aside, Region::Other};

const char* to_string(Region r);
std::optional<Region> region_from_string(std::string_view s);

enum class SegmentRole { Banner, Navigation, Main, Contentinfo, Complementary, Article, Section, Form, Generic };

const char* to_string(SegmentRole r);
std::optional<SegmentRole> segment_role_from_string(std::string_view s);

// Landmark or sectioning role of an element, if it has one. An explicit
// role attribute always wins over the tag: role="navigation" on a div is
// navigation, role="presentation" on a nav is nothing. header/footer only
// count as banner/contentinfo when not scoped inside article, aside, main,
// nav or section.
std::optional<SegmentRole> landmark_role(const html::Node& element);

// Region of the nearest banner/navigation/main/contentinfo/complementary
// ancestor of `node`; Region::Other when there is none.
Region enclosing_region(const html::Node& node);

}  // namespace convbrowse
