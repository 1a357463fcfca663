// SPDX-License-Identifier: Apache-2.0
import init, { compile_schedule, theory_curve, simulate_decay } from "./pkg/cdd_web.js";

const COLORS = { free: "#888", pulse_X: "#d33", pulse_Y: "#3a3", pulse_Z: "#36c", phase_gap: "#fa0" };
const SERIES = ["#36c", "#d33", "#3a3", "#a3c", "#888"];

function values(form) {
  return Object.fromEntries([...new FormData(form)].map(([k, v]) => [k, k === "pair" ? v : Number(v)]));
}

// Runs `fn` and shows its JSON result, or the error thrown by the binding.
function run(section, fn) {
  const out = section.querySelector(".out");
  out.classList.remove("error");
  try {
    return fn();
  } catch (e) {
    out.classList.add("error");
    out.textContent = typeof e === "string" ? JSON.parse(e).error : String(e);
  }
}

function drawSchedule(canvas, sched) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const total = sched.summary.total_duration || 1;
  const sx = (canvas.width - 20) / total;
  for (const e of sched.events) {
    const key = e.kind === "pulse" ? `pulse_${e.axis}` : e.kind;
    const h = e.kind === "free" ? 6 : 50;
    ctx.fillStyle = COLORS[key];
    ctx.fillRect(10 + e.start * sx, 70 - h, Math.max(e.duration * sx, 1), h);
  }
  ctx.fillStyle = "#222";
  ctx.fillText(`0`, 10, 85);
  ctx.fillText(`${total}`, canvas.width - 60, 85);
}

// Log-y line plot of named series [{name, xs, ys}].
function plot(canvas, series, xlabel) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const pts = series.flatMap((s) => s.xs.map((x, i) => [x, s.ys[i]])).filter(([, y]) => y > 0);
  if (!pts.length) return;
  const [x0, x1] = [Math.min(...pts.map((p) => p[0])), Math.max(...pts.map((p) => p[0]))];
  const ly = pts.map((p) => Math.log10(p[1]));
  const [y0, y1] = [Math.min(...ly), Math.max(...ly)];
  const px = (x) => 50 + ((x - x0) / (x1 - x0 || 1)) * (w - 70);
  const py = (y) => h - 30 - ((Math.log10(y) - y0) / (y1 - y0 || 1)) * (h - 50);
  ctx.strokeStyle = "#aaa";
  ctx.strokeRect(50, 20, w - 70, h - 50);
  ctx.fillStyle = "#222";
  ctx.fillText(`1e${y1.toFixed(1)}`, 5, 24);
  ctx.fillText(`1e${y0.toFixed(1)}`, 5, h - 30);
  ctx.fillText(`${xlabel} ${x0.toPrecision(3)} … ${x1.toPrecision(3)}`, 50, h - 8);
  series.forEach((s, k) => {
    ctx.strokeStyle = ctx.fillStyle = SERIES[k % SERIES.length];
    ctx.beginPath();
    s.xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(s.ys[i])) : ctx.moveTo(px(x), py(s.ys[i]))));
    ctx.stroke();
    ctx.fillText(s.name, w - 150, 35 + 14 * k);
  });
}

function onSubmit(id, handler) {
  const section = document.getElementById(id);
  const form = section.querySelector("form");
  const go = () => run(section, () => handler(values(form), section));
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    go();
  });
  go();
}

await init();

onSubmit("schedule", (v, s) => {
  const sched = JSON.parse(compile_schedule(v.level, v.pdd, v.tau0, v.delta, v.fa, v.pair));
  drawSchedule(s.querySelector("canvas"), sched);
  s.querySelector(".out").textContent = JSON.stringify(sched.summary, null, 2);
});

onSubmit("theory", (v, s) => {
  const r = JSON.parse(theory_curve(v.j, v.beta, v.tau0, v.max));
  const xs = r.levels.map((l) => l.level);
  plot(
    s.querySelector("canvas"),
    [
      { name: "CDD bound", xs, ys: r.levels.map((l) => l.cdd_bound) },
      { name: "PDD bound", xs, ys: r.levels.map((l) => l.pdd_bound) },
      { name: "ε", xs, ys: r.levels.map((l) => l.epsilon) },
    ],
    "level",
  );
  s.querySelector(".out").textContent =
    `optimal level ${r.optimal_level} (continuous ${r.optimal_level_continuous.toFixed(3)}), ` +
    (r.pessimistic ? "J < β" : "J ≥ β: bounds assume J < β");
});

onSubmit("decay", (v, s) => {
  const config = {
    seeds: v.seeds,
    bath: { n_bath: v.n_bath, beta: v.beta, j: v.j },
    timing: { tau0: v.tau0 },
    sweep: { cdd_levels: [1, 2, 3], cycles: v.cycles, pdd_match_level: 3, free: true },
  };
  const r = JSON.parse(simulate_decay(JSON.stringify(config)));
  plot(
    s.querySelector("canvas"),
    r.curves.map((c) => ({ name: c.label, xs: c.time, ys: c.signal })),
    "time",
  );
  s.querySelector(".out").textContent = r.curves
    .map((c) => `${c.label.padEnd(6)} rate ${c.fit ? c.fit.rate.toExponential(3) : "fit failed"}`)
    .join("\n");
});
