#include "convbrowse/landmarks.hpp"

#include "convbrowse/text.hpp"

namespace convbrowse {

const char* to_string(Region r) {
  switch (r) {
    case Region::Header: return "header";
    case Region::Nav: return "nav";
    case Region::Main: return "main";
    case Region::Footer: return "footer";
    case Region::Aside: return "aside";
    case Region::Other: return "other";
  }
  return "other";
}

std::optional<Region> region_from_string(std::string_view s) {
  for (Region r : kAllRegions) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

const char* to_string(SegmentRole r) {
  switch (r) {
    case SegmentRole::Banner: return "banner";
    case SegmentRole::Navigation: return "navigation";
    case SegmentRole::Main: return "main";
    case SegmentRole::Contentinfo: return "contentinfo";
    case SegmentRole::Complementary: return "complementary";
    case SegmentRole::Article: return "article";
    case SegmentRole::Section: return "section";
    case SegmentRole::Form: return "form";
    case SegmentRole::Generic: return "generic";
  }
  return "generic";
}

std::optional<SegmentRole> segment_role_from_string(std::string_view s) {
  for (auto r : {SegmentRole::Banner, SegmentRole::Navigation, SegmentRole::Main, SegmentRole::Contentinfo,
                 SegmentRole::Complementary, SegmentRole::Article, SegmentRole::Section, SegmentRole::Form,
                 SegmentRole::Generic}) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

namespace {

bool scoped_in_sectioning(const html::Node& el) {
  for (const html::Node* p = el.parent; p; p = p->parent) {
    if (p->is("article") || p->is("aside") || p->is("main") || p->is("nav") || p->is("section")) return true;
  }
  return false;
}

}  // namespace

std::optional<SegmentRole> landmark_role(const html::Node& el) {
  if (!el.is_element()) return std::nullopt;
  if (auto role = el.attr("role")) {
    auto tokens = split(collapse_whitespace(to_lower(*role)), ' ');
    const std::string& r = tokens.front();
    if (!r.empty()) {
      if (r == "banner") return SegmentRole::Banner;
      if (r == "navigation") return SegmentRole::Navigation;
      if (r == "main") return SegmentRole::Main;
      if (r == "contentinfo") return SegmentRole::Contentinfo;
      if (r == "complementary") return SegmentRole::Complementary;
      if (r == "article") return SegmentRole::Article;
      if (r == "region") return SegmentRole::Section;
      if (r == "form" || r == "search") return SegmentRole::Form;
      return std::nullopt;
    }
  }
  const std::string& t = el.tag;
  if (t == "header") return scoped_in_sectioning(el) ? std::nullopt : std::optional(SegmentRole::Banner);
  if (t == "footer") return scoped_in_sectioning(el) ? std::nullopt : std::optional(SegmentRole::Contentinfo);
  if (t == "nav") return SegmentRole::Navigation;
  if (t == "main") return SegmentRole::Main;
  if (t == "aside") return SegmentRole::Complementary;
  if (t == "article") return SegmentRole::Article;
  if (t == "section") return SegmentRole::Section;
  if (t == "form") return SegmentRole::Form;
  return std::nullopt;
}

Region enclosing_region(const html::Node& node) {
  for (const html::Node* p = node.parent; p; p = p->parent) {
    auto role = landmark_role(*p);
    if (!role) continue;
    switch (*role) {
      case SegmentRole::Banner: return Region::Header;
      case SegmentRole::Navigation: return Region::Nav;
      case SegmentRole::Main: return Region::Main;
      case SegmentRole::Contentinfo: return Region::Footer;
      case SegmentRole::Complementary: return Region::Aside;
      default: break;
    }
  }
  return Region::Other;
}

}  // namespace convbrowse
