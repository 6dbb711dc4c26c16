"""CLI: one-shot extraction or a local embedding service.

    extract --in reviews.tsv --out store.emb --max-len 128 --mode pooled
    extract --in - --out - --max-len 128 --serve 8900
"""

from __future__ import annotations

import argparse
import json
import sys
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

from .extract import ExtractionJob, extract
from .model import encode_batch, load_encoder, load_tokenizer


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extract",
        description="Run the frozen encoder over prepared reviews",
    )
    parser.add_argument("--in", dest="infile", required=True,
                        help="prepared review table (ignored with --serve)")
    parser.add_argument("--out", required=True,
                        help="output store path (ignored with --serve)")
    parser.add_argument("--max-len", type=int, required=True, choices=[128, 256])
    parser.add_argument("--mode", choices=["pooled", "tokens"], default="pooled")
    parser.add_argument("--serve", type=int, metavar="PORT",
                        help="serve the embedding protocol instead of extracting")
    parser.add_argument("--batch", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--model-dir", help="local checkpoint directory")
    parser.add_argument("--vocab", help="vocabulary file (default: bundled)")
    parser.add_argument("--pooler", action="store_true",
                        help="pool via the tanh pooler transform instead of the raw [CLS] state")
    return parser


def _make_handler(model, tokenizer, max_length):
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            if self.path != "/v1/embed":
                self.send_response(404)
                self.end_headers()
                return
            length = int(self.headers.get("Content-Length", 0))
            try:
                items = json.loads(self.rfile.read(length))["items"]
                texts = [item["text"] for item in items]
                hidden, _, _ = encode_batch(model, tokenizer, texts, max_length)
                body = json.dumps({
                    "embeddings": [
                        {"id": item["id"],
                         "vector": [float(x) for x in hidden[i, 0]]}
                        for i, item in enumerate(items)
                    ]
                }).encode()
            except (KeyError, ValueError, json.JSONDecodeError):
                self.send_response(400)
                self.end_headers()
                return
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    return Handler


def serve(port, max_length, seed, model_dir=None, vocab_path=None):
    tokenizer = load_tokenizer(vocab_path)
    model = load_encoder(model_dir, vocab_size=len(tokenizer), seed=seed)
    server = HTTPServer(("127.0.0.1", port), _make_handler(model, tokenizer, max_length))
    print(f"serving embeddings on http://127.0.0.1:{server.server_port}/v1/embed")
    server.serve_forever()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.serve is not None:
            serve(args.serve, args.max_len, args.seed,
                  args.model_dir, args.vocab)
            return 0
        job = ExtractionJob(
            input_path=Path(args.infile),
            output_path=Path(args.out),
            max_length=args.max_len,
            mode=args.mode,
            batch_size=args.batch,
            seed=args.seed,
            model_dir=Path(args.model_dir) if args.model_dir else None,
            vocab_path=Path(args.vocab) if args.vocab else None,
            use_pooler=args.pooler,
        )
        count = extract(job)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {count} records to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
