"""Rebuild the bundled 3-repository mini-dataset under src/maintscore/data/mini/.

Every commit has a fixed identity and timestamp, so commit hashes (and hence
the dataset CSV) are identical across rebuilds.

    python scripts/build_mini_dataset.py [--out DIR]
"""

from __future__ import annotations

import argparse
import csv
import shutil
import tempfile
from datetime import timedelta
from pathlib import Path

from maintscore.history.scripted import ScriptedRepo

H = timedelta(hours=1)
D = timedelta(days=1)

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "maintscore" / "data" / "mini"


def java_method(name: str, body: list[str], params: str = "") -> str:
    inner = "".join(f"        {line}\n" for line in body)
    return f"    void {name}({params}) {{\n{inner}    }}\n"


def java_class(name: str, methods: list[str], package: str = "app") -> str:
    return f"package {package};\n\npublic class {name} {{\n" + "\n".join(methods) + "}\n"


def build_torch(root: Path) -> list[tuple[str, str]]:
    """Java flashlight app: three energy commits on a linear history."""
    r = ScriptedRepo(root)
    toggle = java_method("toggle", ["if (on) {", "    off();", "} else {", "    on();", "}"])
    r.write("src/main/java/app/Torch.java", java_class("Torch", [toggle]))
    r.write("src/test/java/app/TorchTest.java", java_class("TorchTest", [java_method("testToggle", ["new Torch().toggle();"])]))
    r.commit("initial torch", timedelta(0))

    sensor = java_method("onSensor", ["int v = read();", "log(v);"], "int level")
    r.write("src/main/java/app/Sensor.java", java_class("Sensor", [sensor]))
    r.commit("sensor", 2 * D)

    guard = java_method("toggle", [
        "if (battery.low() && !charging) {", "    dim();", "    return;", "}",
        "if (on) {", "    off();", "} else if (ambient > 40 || night) {", "    on();", "} else {", "    blink();", "}",
        "for (int i = 0; i < retries; i++) {", "    if (check(i)) break;", "}",
    ])
    e1 = r.commit_file("src/main/java/app/Torch.java", java_class("Torch", [guard]), "Skip torch when battery low", 3 * D)

    r.write("src/main/java/app/Sensor.java", java_class("Sensor", [
        java_method("onSensor", ["int v = read();", "log(v);"], "int level"),
        java_method("onIdle", ["sleep(50);", "log(0);"]),
    ]))
    e2 = r.commit("Sleep sensor when idle", 3 * D + 30 * timedelta(minutes=1))

    r.commit_file("src/main/java/app/Torch.java", java_class("Torch", [guard.replace("retries", "maxRetries")]),
                  "rename retries", 3 * D + 5 * H)

    helper = java_method("lowPower", ["dim();", "return;"])
    simple = java_method("toggle", ["if (battery.low()) { lowPower(); return; }", "if (on) off(); else on();"])
    e3 = r.commit_file("src/main/java/app/Torch.java", java_class("Torch", [simple, helper]),
                       "Simplify low-power path", 40 * D)
    r.commit_file("README.md", "# torch\n", "readme", 41 * D)
    return [(e1, "Power Save Mode"), (e2, "Power Awareness"), (e3, "Bug Fix & Code Refinement")]


def kotlin_file(name: str, funs: list[str]) -> str:
    return f"package tracker\n\nclass {name} {{\n" + "\n".join(funs) + "}\n"


def kfun(name: str, body: list[str], params: str = "") -> str:
    inner = "".join(f"        {line}\n" for line in body)
    return f"    fun {name}({params}) {{\n{inner}    }}\n"


def build_tracker(root: Path) -> list[tuple[str, str]]:
    """Kotlin location tracker with duplicated polling code."""
    r = ScriptedRepo(root)
    poll = ["val loc = gps.read()", "if (loc != null) {", "    store.save(loc)", "    ui.update(loc)", "}",
            "counter += 1", "log(\"poll\")"]
    r.write("app/src/main/kotlin/tracker/Tracker.kt", kotlin_file("Tracker", [kfun("poll", poll)]))
    r.commit("tracker", timedelta(0))

    r.write("app/src/main/kotlin/tracker/Background.kt", kotlin_file("Background", [kfun("tick", poll)]))
    r.commit("background polling", 5 * D)

    wake = kfun("tick", ["wakeLock.acquire()", *poll, "wakeLock.release()"])
    e1 = r.commit_file("app/src/main/kotlin/tracker/Background.kt", kotlin_file("Background", [wake]),
                       "Hold a wakelock while polling", 6 * D)

    r.write("app/src/main/kotlin/tracker/Tracker.kt", kotlin_file("Tracker", [
        kfun("poll", poll, "a: Int, b: Int, c: Int, d: Int, e: Int, f: Int, g: Int"),
    ]))
    r.commit("configurable poll", 8 * D)

    doze = kfun("tick", [
        "when (mode) {", "    Mode.DOZE -> return", "    Mode.LOW -> delay(600)", "    else -> delay(60)", "}",
        "wakeLock.acquire(10_000)", *poll, "wakeLock.release()",
    ])
    e2 = r.commit_file("app/src/main/kotlin/tracker/Background.kt", kotlin_file("Background", [doze]),
                       "Respect doze mode", 8 * D + 20 * H)

    r.commit_file("app/src/main/kotlin/tracker/Background.kt", kotlin_file("Background", [doze.replace("600", "900")]),
                  "tune delay", 9 * D)
    e3 = r.commit_file("app/src/main/kotlin/tracker/Battery.kt", kotlin_file("Battery", [
        kfun("level", ["return meter.read()"]),
    ]), "Battery monitor", 12 * D)
    return [(e1, "Wakelock Addition"), (e2, "PowerConditionalStrategy:PowerSaveMode"), (e3, "Power Usage Monitoring")]


def build_player(root: Path) -> list[tuple[str, str]]:
    """Mixed Java/Kotlin player with a feature branch merge and a file move."""
    r = ScriptedRepo(root)
    play = java_method("play", ["decoder.start();", "audio.open();"], "String uri")
    r.write("src/main/java/player/Player.java", java_class("Player", [play], "player"))
    r.commit("player", timedelta(0))

    r.checkout("batch", new_branch=True)
    batch = java_method("flush", ["if (queue.size() > 10) {", "    net.send(queue);", "    queue.clear();", "}"])
    e1 = r.commit_file("src/main/java/player/Uploader.java", java_class("Uploader", [batch], "player"),
                       "Batch network uploads", 1 * D)
    r.checkout("main")
    r.commit_file("src/main/java/player/Player.java",
                  java_class("Player", [play, java_method("stop", ["audio.close();"])], "player"), "stop", 1 * D + 2 * H)
    r.merge("batch", "Merge branch 'batch'", 2 * D)

    r.move("src/main/java/player/Uploader.java", "src/main/java/player/net/Uploader.java")
    r.commit("move uploader", 3 * D)

    wake = kfun("hold", ["lock.acquire()", "try {", "    work()", "} finally {", "    lock.release()", "}"])
    e2 = r.commit_file("src/main/kotlin/player/Locks.kt", kotlin_file("Locks", [wake]), "Scope wakelock to work", 4 * D)
    r.commit_file("src/main/java/player/net/Uploader.java",
                  java_class("Uploader", [batch.replace("10", "50")], "player"), "bigger batches", 500 * D)
    return [(e1, "Power Save Mode"), (e2, "Wakelock Optimization")]


PROJECTS = (("torch", build_torch), ("tracker", build_tracker), ("player", build_player))


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    rows = []
    with tempfile.TemporaryDirectory() as tmp:
        for name, build in PROJECTS:
            energy = build(Path(tmp) / name)
            bundle = args.out / f"{name}.bundle"
            if bundle.exists():
                bundle.unlink()
            ScriptedRepo(Path(tmp) / name).bundle(bundle)
            rows.extend((f"{name}.bundle", h, label) for h, label in energy)
            shutil.rmtree(Path(tmp) / name)
    with open(args.out / "dataset.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["project_url", "commit_hash", "category"])
        w.writerows(rows)
    print(f"wrote {len(rows)} records to {args.out / 'dataset.csv'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
