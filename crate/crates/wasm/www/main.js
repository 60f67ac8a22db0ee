import init, { classify, enumerate, sextic } from "./pkg/orbicurve_wasm.js";

const $ = (id) => document.getElementById(id);

function show(prefix, text, summarize) {
  const v = JSON.parse(text);
  const summary = $(prefix + "-summary");
  if (v.error) {
    summary.textContent = v.error;
    summary.className = "summary err";
  } else {
    summary.textContent = summarize(v);
    summary.className = "summary";
  }
  $(prefix + "-out").textContent = JSON.stringify(v, null, 2);
}

function timed(fn) {
  const t0 = performance.now();
  const out = fn();
  return [out, Math.round(performance.now() - t0)];
}

function wire(prefix, run) {
  const button = $(prefix + "-run");
  button.disabled = false;
  button.addEventListener("click", run);
}

await init();
$("status").textContent = "Ready. Everything below runs locally with exact rational arithmetic.";

wire("c", () => {
  const text = classify(Number($("c-genus").value), $("c-marks").value);
  show("c", text, (v) => `kappa = ${v.kappa}, canonical degree = ${v.degree}`);
});

wire("e", () => {
  const [text, ms] = timed(() => enumerate($("e-marks").value, Number($("e-height").value), $("e-exclude").value));
  show("e", text, (v) => `${v.count} points of height at most ${v.height} for ${v.spec} (${ms} ms)`);
});

wire("s", () => {
  const [text, ms] = timed(() => sextic(Number($("s-seed").value)));
  show("s", text, (v) => `${v.base_point_count} base points, degree ${v.H_degree}, fibre genus ${v.fiber.genus} (${ms} ms)`);
});
