#!/usr/bin/env python3
"""Writes the six-site evaluation corpus under fixtures/corpus."""

import json
import shutil
from pathlib import Path

OUT = Path(__file__).resolve().parent / "corpus"


def page(title, body, lang="en", head_extra=""):
    return (
        f'<!DOCTYPE html>\n<html lang="{lang}">\n<head>\n<meta charset="utf-8">\n'
        f"<title>{title}</title>\n{head_extra}</head>\n<body>\n{body}\n</body>\n</html>\n"
    )


def links(items, indent="  "):
    return "\n".join(f'{indent}<li><a href="{href}">{label}</a></li>' for href, label in items)


def write(site, rel, html):
    path = OUT / site / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(html, encoding="utf-8")


# --- gazette: newspaper ------------------------------------------------------

GAZETTE_NAV = [
    ("/", "Home"),
    ("/news.html", "News"),
    ("/sports.html", "Sports"),
    ("/covid.html", "Coronavirus"),
    ("/weather.html", "Weather"),
    ("/about.html", "About"),
]

ARTICLES = {
    "covid-cases-rise": {
        "title": "COVID cases rise in Tambury",
        "author": "Jane Smith",
        "paragraphs": [
            "Health officials reported 42 new cases this week. That is the highest weekly figure since April.",
            "Testing has been expanded at the community centre. Residents are asked to book online before "
            "visiting. The council will publish an update on Friday.",
        ],
    },
    "covid-vaccine-trial": {
        "title": "COVID vaccine trial begins at Tambury hospital",
        "author": "Priya Patel",
        "paragraphs": [
            "Two hundred volunteers have joined the first phase of the trial. Doses will be given over six weeks.",
            "Researchers expect early results in the spring.",
        ],
    },
    "fair-returns": {
        "title": "Summer fair returns to the green",
        "author": "Tom Baker",
        "paragraphs": [
            "The annual summer fair is back after a year away. Stalls open at ten on Saturday.",
        ],
    },
}


def gazette_page(title, main, lang="en", head_extra=""):
    body = f"""<a href="#content">Skip to content</a>
<header>
  <a href="/"><img src="/logo.png" alt="The Tambury Gazette"></a>
  <p>Tambury's local newspaper since 1921</p>
</header>
<nav aria-label="Main">
<ul>
{links(GAZETTE_NAV)}
</ul>
</nav>
<main id="content">
{main}
</main>
<footer>
  <p>&copy; 2020 The Tambury Gazette.</p>
  <ul>
  <li><a href="/about.html">About us</a></li>
  <li><a href="https://twitter.example/tamburygazette">Twitter</a></li>
  <li><a href="https://facebook.example/tamburygazette">Facebook</a></li>
  </ul>
</footer>"""
    return page(title, body, lang, head_extra)


def gazette():
    teasers = {
        "covid-cases-rise": "Health officials report the highest weekly figure since April.",
        "covid-vaccine-trial": "Two hundred volunteers have signed up for the first phase.",
        "fair-returns": "The annual fair is back after a year away.",
    }
    front = ["<h1>Today in Tambury</h1>",
             "<p>The latest COVID figures are updated every morning at nine.</p>"]
    for slug, teaser in teasers.items():
        front.append(
            f'<article>\n  <h2><a href="/articles/{slug}.html">{ARTICLES[slug]["title"]}</a></h2>\n'
            f"  <p>{teaser}</p>\n</article>"
        )
    write("gazette", "index.html", gazette_page(
        "The Tambury Gazette", "\n".join(front),
        head_extra='<meta name="description" content="Local news, sport and weather for Tambury and the '
                   'surrounding villages.">\n'))

    news = ["<h1>News</h1>", "<ul>"]
    news += [f'  <li><a href="/articles/{s}.html">{a["title"]}</a></li>' for s, a in ARTICLES.items()]
    news.append("</ul>")
    write("gazette", "news.html", gazette_page("News - The Tambury Gazette", "\n".join(news)))

    covid = ["<h1>Coronavirus</h1>", "<p>Our coverage of the pandemic in Tambury.</p>", "<ul>"]
    covid += [f'  <li><a href="/articles/{s}.html">{ARTICLES[s]["title"]}</a></li>'
              for s in ("covid-cases-rise", "covid-vaccine-trial")]
    covid.append("</ul>")
    write("gazette", "covid.html", gazette_page("Coronavirus - The Tambury Gazette", "\n".join(covid)))

    for slug, heading, text in [
        ("sports", "Sports", "Tambury Town won again on Saturday."),
        ("weather", "Weather", "Sunny spells with a chance of showers."),
        ("about", "About", "The Tambury Gazette has served the town for a century."),
    ]:
        write("gazette", f"{slug}.html", gazette_page(
            f"{heading} - The Tambury Gazette", f"<h1>{heading}</h1>\n<p>{text}</p>"))

    for slug, a in ARTICLES.items():
        paras = "\n".join(f"<p>{p}</p>" for p in a["paragraphs"])
        main = (f'<article>\n<h1>{a["title"]}</h1>\n<p class="byline">By {a["author"]}</p>\n'
                f"{paras}\n</article>")
        write("gazette", f"articles/{slug}.html", gazette_page(
            a["title"], main, lang="en-GB",
            head_extra=f'<meta name="author" content="{a["author"]}">\n'
                       f'<meta name="last-modified" content="2020-06-01">\n'))
    return [href for href, _ in GAZETTE_NAV]


# --- sports: link-rich results site -------------------------------------------

TEAMS = ["Aldwick Rovers", "Brenford City", "Carrow United", "Dunmore Athletic", "Elsworth Town",
         "Fenwick Wanderers", "Glenbury Albion", "Harfield Park"]


def sports():
    nav = [("/", "Home"), ("/football.html", "Football"), ("/cricket.html", "Cricket"),
           ("/tennis.html", "Tennis"), ("/results.html", "Results"), ("/contact.html", "Contact")]

    def sports_page(title, main):
        body = f"""<header><p class="brand">Tambury Sport</p></header>
<nav>
<ul>
{links(nav)}
</ul>
</nav>
<main>
{main}
</main>
<footer><p>Scores are provisional until confirmed by the league.</p></footer>"""
        return page(title, body)

    matches = []
    for i in range(1, 41):
        home = TEAMS[i % len(TEAMS)]
        away = TEAMS[(i * 3 + 1) % len(TEAMS)]
        if away == home:
            away = TEAMS[(i + 1) % len(TEAMS)]
        matches.append((f"/match/{i}.html", f"Match {i}: {home} v {away}"))
    main = "<h1>Latest results</h1>\n<ol>\n" + links(matches) + "\n</ol>"
    write("sports", "index.html", sports_page("Tambury Sport", main))
    for href, label in nav[1:]:
        write("sports", href.lstrip("/"), sports_page(f"{label} - Tambury Sport", f"<h1>{label}</h1>\n<p>Coming soon.</p>"))
    # Reports 1 to 4 were never published, so those links return 404.
    for i, (href, label) in enumerate(matches, start=1):
        if i > 4:
            write("sports", href.lstrip("/"), sports_page(label, f"<h1>{label}</h1>\n<p>Full time.</p>"))
    return [href for href, _ in nav]


# --- reference: encyclopedia with a 40-link menu -------------------------------

TOPICS = ["Astronomy", "Biology", "Chemistry", "Drama", "Economics", "Film", "Geography", "History",
          "Inventions", "Journalism", "Kinship", "Linguistics", "Mathematics", "Navigation", "Oceans",
          "Philosophy", "Quantum theory", "Religion", "Sculpture", "Theatre", "Urban planning", "Volcanoes",
          "Weather", "Xylophones", "Yoga", "Zoology", "Architecture", "Botany", "Cartography", "Dance",
          "Ecology", "Folklore", "Genetics", "Heraldry", "Immunology", "Jazz", "Knots", "Logic",
          "Music", "Nutrition"]


def reference():
    nav = [(f"/topic/{i}.html", t) for i, t in enumerate(TOPICS, start=1)]

    def ref_page(title, main):
        body = f"""<header><p>Tambury Reference Library</p></header>
<nav aria-label="Topics">
<ul>
{links(nav)}
</ul>
</nav>
<main>
{main}
</main>"""
        return page(title, body)

    write("reference", "index.html", ref_page(
        "Tambury Reference", "<h1>Welcome</h1>\n<p>Browse forty topics from the menu.</p>"))
    for href, label in nav:
        write("reference", href.lstrip("/"), ref_page(
            f"{label} - Tambury Reference", f"<h1>{label}</h1>\n<p>An introduction to {label.lower()}.</p>"))
    return [href for href, _ in nav]


# --- health: menu split between a navigation bar and header utilities ---------

def health():
    utility = [("/login.html", "Sign in"), ("/donate.html", "Donate"), ("/search.html", "Search")]
    nav = [("/conditions.html", "Conditions"), ("/treatments.html", "Treatments"),
           ("/wellbeing.html", "Wellbeing"), ("/news.html", "Health news"), ("/contact.html", "Contact us")]
    featured = [("/conditions/asthma.html", "Asthma"), ("/conditions/diabetes.html", "Diabetes"),
                ("/conditions/flu.html", "Flu"), ("/treatments/physio.html", "Physiotherapy")]
    legal = [("/privacy.html", "Privacy"), ("/terms.html", "Terms of use")]

    def health_page(title, main):
        util = " ".join(f'<a href="{h}">{l}</a>' for h, l in utility)
        foot = " | ".join(f'<a href="{h}">{l}</a>' for h, l in legal)
        body = f"""<header>
  <p class="brand">Tambury Health</p>
  <div class="utility">{util}</div>
</header>
<nav>
<ul>
{links(nav)}
</ul>
</nav>
<main>
{main}
</main>
<footer><p>{foot}</p></footer>"""
        return page(title, body)

    home = "<h1>Tambury Health</h1>\n<p>Featured conditions and treatments:</p>\n<ul>\n" + links(featured) + "\n</ul>"
    write("health", "index.html", health_page("Tambury Health", home))
    for href, label in utility + nav + featured + legal:
        write("health", href.lstrip("/"), health_page(f"{label} - Tambury Health", f"<h1>{label}</h1>\n<p>Information about {label.lower()}.</p>"))
    return [h for h, _ in nav + utility]


# --- society: ARIA navigation role on a div -----------------------------------

def society():
    nav = [("/politics.html", "Politics"), ("/community.html", "Community"), ("/education.html", "Education"),
           ("/environment.html", "Environment")]
    stories = [("/stories/1.html", "Library opening hours extended"), ("/stories/2.html", "New cycle lanes approved")]
    trending = [(f"/trending/{i}.html", f"Trending story {i}") for i in range(1, 11)]
    footer = [("/privacy.html", "Privacy"), ("/terms.html", "Terms"), ("/accessibility.html", "Accessibility"),
              ("/careers.html", "Careers"), ("/press.html", "Press"), ("/advertise.html", "Advertise")]

    def society_page(title, main, aside=""):
        body = f"""<div class="top"><span>Tambury Society</span></div>
<div role="navigation" class="menu">
<ul>
{links(nav)}
</ul>
</div>
<main>
{main}
</main>
{aside}<footer>
<ul>
{links(footer)}
</ul>
</footer>"""
        return page(title, body)

    home_main = "<h1>Society</h1>\n<ul>\n" + links(stories) + "\n</ul>"
    aside = "<aside>\n<h2>Trending</h2>\n<ul>\n" + links(trending) + "\n</ul>\n</aside>\n"
    write("society", "index.html", society_page("Tambury Society", home_main, aside))
    for href, label in nav + stories + trending + footer:
        write("society", href.lstrip("/"), society_page(f"{label} - Tambury Society", f"<h1>{label}</h1>\n<p>{label}.</p>"))
    return [h for h, _ in nav]


# --- science: unmarked menu div with a home-only submenu ----------------------

FIELDS = ["Physics", "Chemistry", "Biology", "Geology", "Astronomy", "Ecology", "Genetics", "Robotics",
          "Medicine", "Computing"]


def science():
    top = [(f"/field/{i}.html", f) for i, f in enumerate(FIELDS, start=1)]
    sub = [(f"/sub/{i}.html", f"{FIELDS[i - 1]} projects") for i in range(1, 11)]
    info = [(f"/info/{i}.html", f"Info {i}") for i in range(1, 26)]

    def science_page(title, main, with_sub=False):
        submenu = ""
        if with_sub:
            submenu = "\n  <ul class=\"submenu\">\n" + links(sub, "    ") + "\n  </ul>"
        body = f"""<div class="masthead"><p>Tambury Science</p></div>
<div class="menu">
  <ul>
{links(top, "    ")}
  </ul>{submenu}
</div>
<main>
{main}
</main>
<footer>
<ul>
{links(info)}
</ul>
</footer>"""
        return page(title, body)

    write("science", "index.html", science_page(
        "Tambury Science", "<h1>Tambury Science</h1>\n<p>News from the labs.</p>", with_sub=True))
    for href, label in top + sub + info:
        write("science", href.lstrip("/"), science_page(f"{label} - Tambury Science", f"<h1>{label}</h1>\n<p>{label}.</p>"))
    return [h for h, _ in top + sub]


def main():
    if OUT.exists():
        shutil.rmtree(OUT)
    sites = [("gazette", gazette), ("sports", sports), ("reference", reference), ("health", health),
             ("society", society), ("science", science)]
    manifest = {"crawl": {"max_depth": 3, "max_pages": 10}, "sites": []}
    for site_id, build in sites:
        truth = build()
        (OUT / "truth").mkdir(parents=True, exist_ok=True)
        (OUT / "truth" / f"{site_id}.json").write_text(
            json.dumps({"site": site_id, "menu_links": truth}, indent=2) + "\n", encoding="utf-8")
        manifest["sites"].append({"id": site_id, "root": site_id, "seed": f"http://{site_id}.test/",
                                  "truth": f"truth/{site_id}.json"})
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
