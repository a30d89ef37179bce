"""Regenerate the bundled toy word vectors (src/reproforge/data/vectors.txt).

Each word is a weighted sum of named concept axes plus a small seeded
perturbation, so synonyms land in tight clusters and the geometry stays
readable. See docs/embeddings.md.
"""

import sys
from pathlib import Path

import numpy as np

AXES = [
    "click", "input", "rotate", "swipe", "scroll", "navigate", "widget", "cancel",
    "confirm", "save", "settings", "photo", "delete", "search", "name", "number",
    "size", "history", "privacy", "display", "back", "add", "share", "menu",
    "help", "account", "vertical", "horizontal", "device", "filler", "text",
    "collection", "network", "shape",
]
NOISE = 0.04
SEED = 20231016


def cluster(words, **weights):
    return {w: weights for w in words.split()}


WORDS = {}
# action verbs
WORDS.update(cluster("click press tap select choose pick push hit touch check", click=1.0))
WORDS.update(cluster("input enter type fill write insert key", input=1.0))
WORDS.update(cluster("rotate flip", rotate=1.0))
WORDS.update(cluster("tilt", rotate=0.9, swipe=0.25))
WORDS.update(cluster("turn", rotate=0.8, click=0.55))
WORDS.update(cluster("swipe slide fling", swipe=1.0))
WORDS.update(cluster("drag", swipe=0.9, scroll=0.3))
WORDS.update(cluster("scroll pan", scroll=1.0))
WORDS.update(cluster("move", scroll=0.5, swipe=0.5, navigate=0.3))
# verbs reached through similarity only
WORDS.update(cluster("open", click=0.75, navigate=0.65))
WORDS.update(cluster("launch start", navigate=0.9, click=0.4))
WORDS.update(cluster("go navigate visit", navigate=1.0, click=0.35))
WORDS.update(cluster("take", click=0.7, photo=0.3, filler=0.4))
WORDS.update(cluster("change modify", click=0.62, input=0.6, filler=0.45))
WORDS.update(cluster("edit", input=0.9, click=0.3))
WORDS.update(cluster("set", input=0.6, click=0.4, filler=0.5))
WORDS.update(cluster("toggle enable disable switch", click=0.7, display=0.2, network=0.3))
WORDS.update(cluster("attempt try use", filler=1.0))
# widget words
WORDS.update(cluster("button field box page tab icon dialog option item bar view window link", widget=0.35))
WORDS.update(cluster("cancel dismiss close exit abort", cancel=1.0))
WORDS.update(cluster("ok okay confirm done accept yes apply", confirm=1.0))
WORDS.update(cluster("save", save=1.0))
WORDS.update(cluster("store", save=0.8, filler=0.6))
WORDS.update(cluster("keep", save=0.6, filler=0.8))
WORDS.update(cluster("settings setting preferences preference options configuration setup", settings=1.0))
WORDS.update(cluster("photo photos picture image camera snapshot pic", photo=1.0))
WORDS.update(cluster("delete remove clear erase trash", delete=1.0))
WORDS.update(cluster("search find query lookup", search=1.0))
WORDS.update(cluster("name title username label", name=1.0))
WORDS.update(cluster("number amount count quantity digits", number=1.0))
WORDS.update(cluster("age", number=0.7, name=0.3))
WORDS.update(cluster("size resolution", size=1.0))
WORDS.update(cluster("large small medium big", size=0.8, filler=0.3))
WORDS.update(cluster("font", size=0.6, display=0.5))
WORDS.update(cluster("history log recent", history=1.0))
WORDS.update(cluster("privacy security permissions", privacy=1.0))
WORDS.update(cluster("display theme dark light mode appearance brightness", display=1.0))
WORDS.update(cluster("back return previous", back=1.0))
WORDS.update(cluster("home", back=0.5, navigate=0.5))
WORDS.update(cluster("add new create plus", add=1.0))
WORDS.update(cluster("share send export", share=1.0))
WORDS.update(cluster("menu more overflow", menu=1.0))
WORDS.update(cluster("help about info faq support", help=1.0))
WORDS.update(cluster("account login password email user profile", account=1.0))
WORDS.update(cluster("up", vertical=1.0))
WORDS.update(cluster("down", vertical=-1.0))
WORDS.update(cluster("right", horizontal=1.0))
WORDS.update(cluster("left", horizontal=-1.0))
WORDS.update(cluster("screen device phone orientation landscape portrait tablet", device=1.0))
WORDS.update(cluster("hello text word value message comment note", text=1.0))
WORDS.update(cluster("list entry row grid album", collection=1.0))
WORDS.update(cluster("gallery", collection=0.6, photo=0.6))
WORDS.update(cluster("wifi bluetooth network internet connection", network=1.0))
WORDS.update(cluster("circle square shape", shape=1.0))
WORDS.update(cluster("app application", filler=0.5, widget=0.2))


def build():
    rng = np.random.default_rng(SEED)
    index = {a: i for i, a in enumerate(AXES)}
    rows = []
    for word in sorted(WORDS):
        vec = np.zeros(len(AXES))
        for axis, weight in WORDS[word].items():
            vec[index[axis]] = weight
        vec = vec + rng.normal(0.0, NOISE, len(AXES))
        rows.append((word, np.round(vec, 4)))
    return rows


def main(out=None):
    out = Path(out or Path(__file__).resolve().parents[1] / "src/reproforge/data/vectors.txt")
    rows = build()
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(f"{len(rows)} {len(AXES)}\n")
        for word, vec in rows:
            fh.write(word + " " + " ".join(f"{x:.4f}" for x in vec) + "\n")
    print(f"wrote {len(rows)} vectors to {out}")


if __name__ == "__main__":
    main(*sys.argv[1:])
