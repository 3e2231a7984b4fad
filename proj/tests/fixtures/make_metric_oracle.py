#!/usr/bin/env python3
"""Writes metric_oracle.tsv from the reference Python implementations.

Requires sacrebleu 2.x, nltk and rouge-score. Hypotheses and references go
through the same word tokenizer the C++ code uses (lowercase ASCII, each ASCII
punctuation mark its own token) and are handed over space-joined.
"""
import logging
import string
import sys

from nltk.stem.porter import PorterStemmer
from nltk.translate.meteor_score import meteor_score
from rouge_score import rouge_scorer
from sacrebleu.metrics import BLEU, CHRF, TER

PAIRS = [
    ("Who is Miss Universe Guyana 2017?", ["Who is Miss Universe Guyana 2017?"]),
    ("Where was Miss Universe Guyana arrested?", ["Where was Miss Universe Guyana arrested in 2017?", "Who is Miss Universe Guyana 2017?"]),
    ("What is the tax rate?", ["Who is X?"]),
    ("Which senator voted against the bill?", ["Which senator voted against the tax bill?", "When was the vote on the tax bill?"]),
    ("How many workers were injured?", ["How many workers were injured in Ohio?"]),
    ("Is it true that crime dropped?", ["How much did crime in Chicago drop?", "Over what period did crime drop?"]),
    ("What did the mayor say?", ["What did the mayor say about the city budget?", "Who is the mayor?", "How large was the city budget in 2015?"]),
    ("Do vaccines cause autism in children?", ["Do vaccines cause autism?"]),
    ("the running dogs were running quickly", ["the dog runs quick and runs", "dogs ran"]),
    ("Born where was Barack Obama?", ["Where was Barack Obama born?"]),
    ("a b c d e f g h", ["h g f e d c b a"]),
    ("What is known about 500 employees?", ["How many employees did the company fire?"]),
    ("What about Mars?", ["Where on Mars was water found?"]),
    ("Who is Senator Warren?", ["Who is Senator Warren?", "What is the wealth tax proposed by Senator Warren?"]),
    ("Is the café in São Paulo open?", ["Is the cafe in Sao Paulo open?"]),
    ("What is 10,000 acres?", ["How many acres did the wildfires burn?", "Where did the wildfires burn?"]),
    ("Why?", ["Why did gas prices rise?"]),
    ("When will the minimum wage in Florida rise to 15 dollars?", ["When will the minimum wage rise to 15 dollars?"]),
    ("generalizations generalization generalize generally", ["general generalized generality"]),
    ("the cat sat on the mat the cat sat", ["the cat sat on the mat", "on the mat sat the cat"]),
]


def tokenize(text):
    out, cur = [], []
    for ch in text:
        if ch.isascii() and ch in string.whitespace:
            if cur:
                out.append("".join(cur))
                cur = []
        elif ch in string.punctuation:
            if cur:
                out.append("".join(cur))
                cur = []
            out.append(ch)
        else:
            cur.append(ch.lower() if ch.isascii() else ch)
    if cur:
        out.append("".join(cur))
    return out


class NoWordnet:
    def synsets(self, *_args, **_kwargs):
        return []


class Tok:
    def tokenize(self, text):
        return text.split()


def main(path):
    logging.getLogger("sacrebleu").setLevel(logging.ERROR)
    bleu2 = BLEU(tokenize="none", max_ngram_order=2, smooth_method="add-k", smooth_value=1)
    bleu4 = BLEU(tokenize="none", max_ngram_order=4, smooth_method="add-k", smooth_value=1)
    chrf = CHRF()
    ter = TER()
    rouge = rouge_scorer.RougeScorer(["rouge1", "rouge2", "rougeL"], tokenizer=Tok())
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

    rows = []
    for hyp, refs in PAIRS:
        h = tokenize(hyp)
        rs = [tokenize(r) for r in refs]
        hj, rj = " ".join(h), [" ".join(r) for r in rs]
        scores = {
            "bleu2": bleu2.sentence_score(hj, rj).score / 100,
            "bleu4": bleu4.sentence_score(hj, rj).score / 100,
            "chrf": chrf.sentence_score(hj, rj).score / 100,
            "meteor": meteor_score(rs, h, preprocess=lambda w: w, stemmer=stemmer, wordnet=NoWordnet()),
            "ter": min(ter.sentence_score(hj, [r]).score / 100 for r in rj),
        }
        multi = rouge.score_multi(rj, hj)
        scores["rouge1"] = multi["rouge1"].fmeasure
        scores["rouge2"] = multi["rouge2"].fmeasure
        scores["rougeL"] = multi["rougeL"].fmeasure
        for name in ("bleu2", "bleu4", "chrf", "meteor", "rouge1", "rouge2", "rougeL", "ter"):
            rows.append(f"{hyp}\t{' ||| '.join(refs)}\t{name}\t{scores[name]:.10f}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("hypothesis\treferences\tmetric\tscore\n")
        f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "metric_oracle.tsv")
