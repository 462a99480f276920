#include "convbrowse/crawler.hpp"

#include <deque>
#include <future>
#include <unordered_set>

#include "convbrowse/html.hpp"
#include "convbrowse/text.hpp"
#include "convbrowse/url.hpp"

namespace convbrowse {

void CrawlConfig::validate() const {
  if (max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
  if (max_pages < 1) throw std::invalid_argument("max_pages must be >= 1");
  if (worker_count < 1) throw std::invalid_argument("worker_count must be >= 1");
  if (ttl_seconds < 1) throw std::invalid_argument("ttl_seconds must be >= 1");
}

namespace {

bool is_html(const PageSource& src) {
  return src.content_type.empty() || src.content_type.find("html") != std::string::npos;
}

std::string document_base(const html::Document& doc, const std::string& page_url) {
  if (const auto* base = doc.find_first("base")) {
    if (auto href = base->attr("href")) {
      try {
        return normalize_url(*href, page_url);
      } catch (const UrlError&) {
      }
    }
  }
  return page_url;
}

std::string anchor_label(const html::Node& a) {
  std::string text = html::text_content(a);
  if (!text.empty()) return text;
  const html::Node* img = nullptr;
  int images = 0;
  html::walk(a, [&](const html::Node& n) {
    if (n.is("img")) {
      img = &n;
      ++images;
    }
    return !html::is_hidden_content(n);
  });
  if (images == 1) {
    if (auto alt = img->attr("alt")) return collapse_whitespace(*alt);
  }
  return {};
}

}  // namespace

std::vector<LinkOccurrence> extract_outlinks(const PageSource& source) {
  std::vector<LinkOccurrence> out;
  if (!is_html(source)) return out;
  auto doc = html::parse(source.body);
  const std::string base = document_base(doc, source.url);
  html::walk(doc.root(), [&](const html::Node& n) {
    if (!n.is_element()) return false;
    if (n.is("template") || n.is("head")) return false;
    if (!n.is("a")) return true;
    auto href = n.attr("href");
    if (!href || is_fragment_only(*href)) return true;
    std::string target;
    try {
      target = normalize_url(*href, base);
    } catch (const UrlError&) {
      return true;
    }
    LinkOccurrence occ;
    occ.source_url = source.url;
    occ.target_url = std::move(target);
    occ.anchor_text = anchor_label(n);
    occ.dom_index = static_cast<int>(out.size());
    occ.region = enclosing_region(n);
    out.push_back(std::move(occ));
    return true;
  });
  return out;
}

std::string extract_title(const PageSource& source) {
  auto doc = html::parse(source.body);
  if (const auto* t = doc.find_first("title")) {
    auto s = html::text_content(*t);
    if (s.empty()) s = collapse_whitespace(t->children.empty() ? "" : t->children.front()->text);
    if (!s.empty()) return s;
  }
  if (const auto* h1 = doc.find_first("h1")) return html::text_content(*h1);
  return {};
}

Crawler::Crawler(FetchFn fetch) : fetch_(std::move(fetch)) {}

std::vector<CrawlRecord> Crawler::crawl(const CrawlConfig& config) const {
  config.validate();
  std::string seed;
  try {
    seed = normalize_url(config.seed);
  } catch (const UrlError& e) {
    throw CrawlError(std::string("invalid seed: ") + e.what());
  }
  const std::string site = registrable_host(parse_url(seed).host);

  struct Pending {
    std::string url;
    int depth;
  };
  std::deque<Pending> frontier{{seed, 0}};
  std::unordered_set<std::string> seen{seed};
  std::vector<CrawlRecord> records;
  const auto max_pages = static_cast<std::size_t>(config.max_pages);

  while (!frontier.empty() && records.size() < max_pages) {
    const std::size_t batch_size =
        std::min({frontier.size(), max_pages - records.size(), static_cast<std::size_t>(config.worker_count)});
    std::vector<Pending> batch(frontier.begin(), frontier.begin() + static_cast<std::ptrdiff_t>(batch_size));
    frontier.erase(frontier.begin(), frontier.begin() + static_cast<std::ptrdiff_t>(batch_size));

    std::vector<std::future<PageSource>> results;
    results.reserve(batch.size());
    for (const auto& p : batch) {
      if (batch.size() == 1) {
        results.push_back(std::async(std::launch::deferred, fetch_, p.url));
      } else {
        results.push_back(std::async(std::launch::async, fetch_, p.url));
      }
    }

    for (std::size_t i = 0; i < batch.size(); ++i) {
      CrawlRecord rec;
      rec.url = batch[i].url;
      rec.depth = batch[i].depth;
      try {
        PageSource src = results[i].get();
        rec.fetch_status = src.status;
        rec.title = is_html(src) ? extract_title(src) : std::string{};
        rec.outlinks = extract_outlinks(src);
      } catch (const FetchError& e) {
        rec.fetch_status = e.status();
        rec.error = e.what();
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      if (!rec.ok() && rec.url == seed) throw CrawlError("seed could not be fetched: " + rec.error);

      if (rec.depth < config.max_depth) {
        for (const auto& link : rec.outlinks) {
          if (seen.count(link.target_url)) continue;
          if (registrable_host(parse_url(link.target_url).host) != site) continue;
          seen.insert(link.target_url);
          frontier.push_back({link.target_url, rec.depth + 1});
        }
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace convbrowse
