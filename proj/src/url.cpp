#include "convbrowse/url.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "convbrowse/text.hpp"

namespace convbrowse {

namespace {

// WHATWG behavior: tabs and newlines anywhere are dropped; C0/space trimmed.
std::string strip_input(std::string_view raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) {
    if (c != '\t' && c != '\n' && c != '\r') s.push_back(c);
  }
  std::size_t b = 0, e = s.size();
  while (b < e && static_cast<unsigned char>(s[b]) <= 0x20) ++b;
  while (e > b && static_cast<unsigned char>(s[e - 1]) <= 0x20) --e;
  return s.substr(b, e - b);
}

// Scheme per RFC 3986 if the string starts with one, else empty.
std::string_view leading_scheme(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return {};
  for (std::size_t i = 1; i < s.size(); ++i) {
    char c = s[i];
    if (c == ':') return s.substr(0, i);
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return {};
  }
  return {};
}

bool must_encode(unsigned char c) {
  return c <= 0x20 || c >= 0x7F || c == '"' || c == '<' || c == '>' || c == '`' || c == '{' ||
         c == '}' || c == '|' || c == '^';
}

std::string encode_path(std::string_view p) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(p.size());
  for (char ch : p) {
    auto c = static_cast<unsigned char>(ch);
    if (ch == '\\') {
      out.push_back('/');
    } else if (must_encode(c)) {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  bool trailing_slash = false;
  // path always starts with '/'
  while (i < path.size()) {
    std::size_t start = i + 1;
    std::size_t end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    std::string_view seg = path.substr(start, end - start);
    bool last = end == path.size();
    if (seg == ".") {
      trailing_slash = last;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = last;
    } else {
      out.push_back(seg);
      trailing_slash = false;
    }
    i = end;
  }
  std::string result;
  for (auto seg : out) {
    result.push_back('/');
    result.append(seg);
  }
  if (trailing_slash || result.empty()) result.push_back('/');
  return result;
}

bool valid_host_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

int default_port(std::string_view scheme) { return scheme == "https" ? 443 : 80; }

Url parse_absolute(const std::string& input, std::string_view s) {
  Url url;
  auto scheme = leading_scheme(s);
  if (scheme.empty()) throw UrlError(input, "missing scheme");
  url.scheme = to_lower(scheme);
  if (url.scheme != "http" && url.scheme != "https") throw UrlError(input, "unsupported scheme '" + url.scheme + "'");
  std::string_view rest = s.substr(scheme.size() + 1);
  if (rest.substr(0, 2) != "//" && rest.substr(0, 2) != "\\\\") throw UrlError(input, "missing authority");
  rest.remove_prefix(2);

  if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
  std::size_t auth_end = rest.find_first_of("/?\\");
  std::string_view authority = rest.substr(0, auth_end);
  std::string_view tail = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);

  if (auto at = authority.rfind('@'); at != std::string_view::npos) {
    url.userinfo = std::string(authority.substr(0, at));
    authority.remove_prefix(at + 1);
  }
  std::string_view host = authority;
  std::string_view port;
  if (!authority.empty() && authority.front() == '[') {
    auto close = authority.find(']');
    if (close == std::string_view::npos) throw UrlError(input, "unterminated IPv6 literal");
    host = authority.substr(0, close + 1);
    auto after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') throw UrlError(input, "junk after IPv6 literal");
      port = after.substr(1);
    }
  } else if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    port = authority.substr(colon + 1);
  }
  if (host.empty()) throw UrlError(input, "empty host");
  url.host = to_lower(host);
  if (url.host.front() != '[') {
    if (!std::all_of(url.host.begin(), url.host.end(), valid_host_char))
      throw UrlError(input, "invalid host");
  }
  if (!port.empty()) {
    if (port.size() > 5 || !std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw UrlError(input, "invalid port");
    int p = std::stoi(std::string(port));
    if (p > 65535) throw UrlError(input, "port out of range");
    url.port = p == default_port(url.scheme) ? -1 : p;
  }

  std::string_view path = tail;
  if (auto q = tail.find('?'); q != std::string_view::npos) {
    path = tail.substr(0, q);
    url.query = std::string(tail.substr(q + 1));
    url.has_query = true;
  }
  url.path = remove_dot_segments(encode_path(path.empty() ? std::string_view("/") : path));
  return url;
}

}  // namespace

std::string Url::authority() const {
  std::string out;
  if (!userinfo.empty()) out += userinfo + "@";
  out += host;
  if (port >= 0) out += ":" + std::to_string(port);
  return out;
}

std::string Url::origin() const { return scheme + "://" + authority(); }

std::string Url::str() const {
  std::string out = origin() + path;
  if (has_query) out += "?" + query;
  return out;
}

Url parse_url(std::string_view absolute) {
  std::string input(absolute);
  return parse_absolute(input, strip_input(absolute));
}

std::string normalize_url(std::string_view absolute) { return parse_url(absolute).str(); }

std::string normalize_url(std::string_view raw, std::string_view base) {
  const std::string input(raw);
  const std::string s = strip_input(raw);
  if (!leading_scheme(s).empty()) return parse_absolute(input, s).str();

  Url b;
  try {
    b = parse_url(base);
  } catch (const UrlError& e) {
    throw UrlError(input, std::string("base is not absolute (") + e.what() + ")");
  }

  std::string_view r = s;
  if (auto hash = r.find('#'); hash != std::string_view::npos) r = r.substr(0, hash);

  if (r.substr(0, 2) == "//") return parse_absolute(input, b.scheme + ":" + std::string(r)).str();

  Url out = b;
  if (r.empty()) return out.str();

  std::string_view path = r;
  std::string_view query;
  bool has_query = false;
  if (auto q = r.find('?'); q != std::string_view::npos) {
    path = r.substr(0, q);
    query = r.substr(q + 1);
    has_query = true;
  }

  if (path.empty()) {
    out.query = std::string(query);
    out.has_query = has_query;
    return out.str();
  }
  std::string merged;
  if (path.front() == '/' || path.front() == '\\') {
    merged = std::string(path);
  } else {
    merged = b.path.substr(0, b.path.rfind('/') + 1) + std::string(path);
  }
  out.path = remove_dot_segments(encode_path(merged));
  out.query = std::string(query);
  out.has_query = has_query;
  return out.str();
}

bool is_fragment_only(std::string_view raw) {
  auto s = strip_input(raw);
  return !s.empty() && s.front() == '#';
}

std::string registrable_host(std::string_view host_in) {
  std::string host = to_lower(host_in);
  if (host.empty() || host.front() == '[') return host;
  if (std::all_of(host.begin(), host.end(), [](char c) { return (c >= '0' && c <= '9') || c == '.'; }))
    return host;
  auto labels = split(host, '.');
  if (labels.size() <= 2) return host;
  static constexpr std::array<std::string_view, 14> kTwoLevel = {
      "co.uk", "org.uk", "ac.uk", "gov.uk", "com.au", "net.au", "org.au",
      "co.jp", "co.nz", "com.br", "co.in", "com.cn", "co.za", "com.mx"};
  std::string last2 = labels[labels.size() - 2] + "." + labels.back();
  std::size_t keep = std::find(kTwoLevel.begin(), kTwoLevel.end(), last2) != kTwoLevel.end() ? 3 : 2;
  if (labels.size() <= keep) return host;
  std::string out;
  for (std::size_t i = labels.size() - keep; i < labels.size(); ++i) {
    if (!out.empty()) out.push_back('.');
    out += labels[i];
  }
  return out;
}

bool same_site(std::string_view url_a, std::string_view url_b) {
  try {
    return registrable_host(parse_url(url_a).host) == registrable_host(parse_url(url_b).host);
  } catch (const UrlError&) {
    return false;
  }
}

std::string last_path_segment(std::string_view url) {
  Url u = parse_url(url);
  std::string_view p = u.path;
  while (!p.empty() && p.back() == '/') p.remove_suffix(1);
  auto slash = p.rfind('/');
  std::string_view seg = slash == std::string_view::npos ? p : p.substr(slash + 1);
  if (seg.empty()) return u.host;
  return std::string(seg);
}

}  // namespace convbrowse
