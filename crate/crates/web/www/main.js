import init, { packingView, tailCurve, walkView } from "./pkg/shallowpack_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function report(id, text, error = false) {
  $(id).textContent = text;
  $(id).classList.toggle("err", error);
}

function guarded(out, fn) {
  return () => {
    try {
      fn();
    } catch (e) {
      report(out, String(e.message ?? e), true);
    }
  };
}

function drawPoints(ctx, points, highlight, color) {
  const { width, height } = ctx.canvas;
  points.forEach(([x, y], i) => {
    const on = highlight.has(i);
    ctx.fillStyle = on ? color : "#999";
    ctx.beginPath();
    ctx.arc(12 + x * (width - 24), height - 12 - y * (height - 24), on ? 4 : 2.5, 0, 2 * Math.PI);
    ctx.fill();
  });
}

// packing

let packing = null;
let member = 0;

function drawPacking() {
  const ctx = $("p-canvas").getContext("2d");
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  if (!packing || packing.members.length === 0) return;
  const set = new Set(packing.members[member]);
  drawPoints(ctx, packing.points, set, "#c33");
  report(
    "p-out",
    `shallow halfplanes: ${packing.shallow_sets}\n` +
      `packing size: ${packing.members.length}\n` +
      `n k / δ²: ${packing.bound.toFixed(1)}\n` +
      `member ${member + 1}: ${set.size} points`
  );
}

$("p-run").onclick = guarded("p-out", () => {
  packing = JSON.parse(packingView(num("p-n"), num("p-k"), num("p-delta"), num("p-seed")));
  member = 0;
  drawPacking();
});

$("p-canvas").onclick = () => {
  if (!packing || packing.members.length === 0) return;
  member = (member + 1) % packing.members.length;
  drawPacking();
};

// tail

function drawTail(c) {
  const ctx = $("t-canvas").getContext("2d");
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  const floor = 1e-12;
  const lo = Math.log10(floor);
  const tMin = c.t[0];
  const tMax = c.t[c.t.length - 1];
  const sx = (t) => 40 + ((t - tMin) / (tMax - tMin || 1)) * (width - 60);
  const sy = (p) => 20 + ((Math.log10(Math.max(p, floor)) / lo)) * (height - 50);
  ctx.strokeStyle = "#ccc";
  ctx.fillStyle = "#666";
  for (let e = 0; e >= lo; e -= 2) {
    ctx.beginPath();
    ctx.moveTo(40, sy(10 ** e));
    ctx.lineTo(width - 20, sy(10 ** e));
    ctx.stroke();
    ctx.fillText(`1e${e}`, 2, sy(10 ** e) + 4);
  }
  ctx.fillText(`t from ${tMin.toFixed(2)} to ${tMax.toFixed(2)}`, width / 2 - 50, height - 8);
  const series = [
    ["bound", c.bound, "#333"],
    ["exact", c.exact.map((v) => v ?? NaN), "#36c"],
    ["empirical", c.empirical, "#c33"],
  ];
  series.forEach(([name, ys, color], k) => {
    ctx.strokeStyle = color;
    ctx.beginPath();
    ys.forEach((y, i) => (i ? ctx.lineTo(sx(c.t[i]), sy(y)) : ctx.moveTo(sx(c.t[i]), sy(y))));
    ctx.stroke();
    ctx.fillStyle = color;
    ctx.fillText(name, width - 90, 30 + 14 * k);
  });
}

$("t-run").onclick = guarded("t-out", () => {
  const c = JSON.parse(tailCurve(num("t-n"), num("t-k"), num("t-m"), num("t-tmax"), num("t-trials"), 7));
  drawTail(c);
  const below = c.exact.every((e, i) => e === null || e < c.bound[i]);
  report("t-out", `exact tail below 2^(-t k (m_j - 1) / n) everywhere: ${below}`);
});

// spanning-tree walk

let walkTimer = null;

$("w-run").onclick = guarded("w-out", () => {
  const w = JSON.parse(walkView(num("w-n"), num("w-k"), num("w-m"), $("w-measure").value, num("w-seed")));
  const ctx = $("w-canvas").getContext("2d");
  clearInterval(walkTimer);
  let step = 0;
  const summary =
    `walk updates: ${w.total_updates}\nbrute force: ${w.brute_force_updates}\n` +
    `ratio: ${(w.total_updates / w.brute_force_updates).toFixed(3)}\nmax error: ${w.max_error}`;
  walkTimer = setInterval(() => {
    const s = w.walk_order[step];
    ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
    drawPoints(ctx, w.points, new Set(w.sets[s]), "#36c");
    report("w-out", `${summary}\n\nset ${s} (${step + 1}/${w.walk_order.length}): ${w.values[s].toPrecision(5)}`);
    step = (step + 1) % w.walk_order.length;
  }, 250);
});

await init();
$("p-run").click();
$("t-run").click();
$("w-run").click();
