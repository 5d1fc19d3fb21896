"""Operator entry points.

Exit codes: 0 success, 1 usage error, 2 data/format error,
3 runtime/divergence error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import engine, metrics, model_io, network, training
from .errors import (ConfigError, CorruptFileError, CorruptModelError,
                     DivergenceError, FormatError, InsufficientDataError,
                     InvalidValueError, LabelError, ShapeError,
                     UnknownClassError)
from .labels import CLASS_NAMES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3

_DATA_ERRORS = (FormatError, CorruptFileError, CorruptModelError,
                UnknownClassError, InsufficientDataError, InvalidValueError,
                LabelError, ShapeError)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _log_config(args: argparse.Namespace) -> None:
    resolved = {k: v for k, v in vars(args).items() if k != "func"}
    print(f"suryanet config: {json.dumps(resolved, default=str)}", file=sys.stderr)


def _cmd_gen_synthetic(args) -> int:
    data = ds.gen_synthetic(args.per_class, args.noise, args.seed)
    ds.save_dataset(args.out, data)
    print(f"wrote {len(data)} sequences to {args.out}")
    return EXIT_OK


def _cmd_train(args) -> int:
    data = ds.load_dataset(args.data)
    config = training.TrainConfig(
        epochs=args.epochs, learning_rate=args.lr, batch_size=args.batch_size,
        seed=args.seed, test_fraction=args.test_fraction)
    net, curve = training.train(data, config)
    model_io.save_model(net, args.out)
    curves_path = Path(args.out).with_name("curves.csv")
    curve.to_csv(curves_path)
    last = curve.records[-1]
    print(f"trained {config.epochs} epochs: train_acc {last.train_acc:.3f} "
          f"val_acc {last.val_acc:.3f}")
    print(f"model: {args.out}")
    print(f"curves: {curves_path}")
    return EXIT_OK


def _predict_labels(net, data: ds.LabeledDataset) -> tuple[np.ndarray, np.ndarray]:
    x, y_true = data.arrays()
    probs = network.forward_batch(net, x)
    return y_true, np.argmax(probs, axis=1)


def _cmd_eval(args) -> int:
    net = model_io.load_model(args.model)
    data = ds.load_dataset(args.data)
    y_true, y_pred = _predict_labels(net, data)
    acc = metrics.accuracy(y_true, y_pred)
    cm = metrics.confusion(y_true, y_pred)
    stats = metrics.per_class_stats(cm)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    metrics.confusion_to_csv(cm, out / "confusion.csv")
    metrics.stats_to_json(stats, out / "per_class.json")
    print(f"accuracy {acc:.3f}")
    print(f"confusion: {out / 'confusion.csv'}")
    print(f"per-class: {out / 'per_class.json'}")
    return EXIT_OK


def _cmd_predict(args) -> int:
    net = model_io.load_model(args.model)
    for path in args.sequences:
        frames, _, _ = ds.read_sequence(path)
        probs = network.forward(net, frames)
        top = int(np.argmax(probs))
        print(f"{path}\t{CLASS_NAMES[top]}\t{probs[top]:.4f}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    net = model_io.load_model(args.model)
    if args.stdio:
        engine.serve_stdio(net, tau=args.tau, stability_n=args.stability_n)
        return EXIT_OK
    host, _, port = args.listen.rpartition(":")
    server = engine.EngineServer(net, host or "127.0.0.1", int(port),
                                 tau=args.tau, stability_n=args.stability_n)
    print(f"listening on {server.address[0]}:{server.address[1]}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def _cmd_inspect_model(args) -> int:
    net = model_io.load_model(args.model)
    per_layer, total = network.param_count(net)
    rows = []
    for layer in net.lstm_layers:
        rows.append(("lstm", f"d={layer.input_dim} h={layer.units}",
                     "sequences" if layer.return_sequences else "last-step"))
    for layer in net.dense_layers:
        rows.append(("dense", f"{layer.w.shape[1]} -> {layer.w.shape[0]}",
                     layer.activation))
    for (kind, dims, extra), count in zip(rows, per_layer):
        print(f"{kind:6s} {dims:20s} {extra:10s} {count}")
    print(f"total {total}")
    print(f"canonical: {'yes' if network.is_canonical(net) else 'no'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="suryanet",
                     description="Surya Namaskar pose-sequence engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-synthetic", help="write a synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", type=int, default=30)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=_cmd_gen_synthetic)

    p = sub.add_parser("train", help="train a model on a dataset directory")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--test-fraction", type=float, default=0.25)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a dataset directory")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("predict", help="classify sequence files")
    p.add_argument("--model", required=True)
    p.add_argument("sequences", nargs="+")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("serve", help="run the streaming engine")
    p.add_argument("--model", required=True)
    p.add_argument("--listen", default="127.0.0.1:7661")
    p.add_argument("--stdio", action="store_true")
    p.add_argument("--tau", type=float, default=engine.DEFAULT_TAU)
    p.add_argument("--stability-n", type=int, default=engine.DEFAULT_STABILITY_N)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("inspect-model", help="print the layer table")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_inspect_model)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _log_config(args)
    try:
        return args.func(args)
    except (ConfigError, _UsageError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DivergenceError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
