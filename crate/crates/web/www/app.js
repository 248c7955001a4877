import init, { Demo, classifyDocuments } from "./pkg/lexpand_web.js";

const $ = (id) => document.getElementById(id);
let demo;
let lastExpand;

function show(id, fn) {
  const out = $(id);
  out.classList.remove("error");
  try {
    out.textContent = fn();
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
  }
}

function fmt(x) {
  return x === undefined ? "undefined" : x.toFixed(6);
}

$("sim-run").onclick = () =>
  show("sim-out", () => {
    const r = demo.similarity($("sim-a").value, $("sim-b").value, $("sim-measure").value, $("sim-variant").value);
    return [
      `${r.a}  ${r.b}  ${fmt(r.score)}`,
      `distance ${r.distance ?? "none"}`,
      `subsumer ${r.subsumer ?? "none"}`,
    ].join("\n");
  });

$("exp-run").onclick = () =>
  show("exp-out", () => {
    const r = demo.expand(
      $("exp-good").value,
      $("exp-bad").value,
      Number($("exp-tg").value),
      Number($("exp-tb").value),
      Number($("exp-limit").value),
    );
    lastExpand = r;
    return [
      `good +${r.added_good.length}: ${r.added_good.join(" ")}`,
      `bad +${r.added_bad.length}: ${r.added_bad.join(" ")}`,
      `skipped ${r.skipped}`,
    ].join("\n");
  });

$("exp-use").onclick = () => {
  if (!lastExpand) return;
  $("cls-good").value = [$("exp-good").value, ...lastExpand.added_good].join(" ");
  $("cls-bad").value = [$("exp-bad").value, ...lastExpand.added_bad].join(" ");
};

$("cls-run").onclick = () => {
  $("cls-plot").innerHTML = "";
  show("cls-out", () => {
    const r = classifyDocuments(
      $("cls-text").value,
      $("cls-good").value,
      $("cls-bad").value,
      Number($("cls-e1").value),
      Number($("cls-e2").value),
    );
    $("cls-plot").innerHTML = r.svg;
    return ["doc\tlabel\tp_good\tp_bad\tavg sign", ...r.rows, "", ...r.clauses].join("\n");
  });
};

// Files are matched by name, so the whole dict/ directory can be selected.
$("files").onchange = async (ev) => {
  const byName = {};
  for (const f of ev.target.files) byName[f.name] = f;
  const read = (name) => (byName[name] ? byName[name].text() : Promise.resolve(""));
  const names = ["noun", "verb", "adj", "adv"].flatMap((p) => [`data.${p}`, `index.${p}`]);
  $("db").textContent = "parsing…";
  try {
    const texts = await Promise.all(names.map(read));
    const next = Demo.fromFiles(...texts);
    demo.free();
    demo = next;
    $("db").textContent = demo.summary();
  } catch (e) {
    $("db").textContent = String(e);
  }
};

await init();
demo = new Demo();
$("db").textContent = `${demo.summary()} (toy database)`;
