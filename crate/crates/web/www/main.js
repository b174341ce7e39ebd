import init, { labelNames, basinMap, gadOrbit, reducedOrbit } from "./pkg/saddlewalk_web.js";

const COLORS = ["#2b8a3e", "#868e96", "#e8590c", "#c92a2a", "#1971c2", "#f59f00", "#000000"];
const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function basin() {
  const n = Math.max(8, Math.round(num("b-n")));
  const nx = n, ny = Math.max(8, Math.round(n / 2));
  const [xlo, xhi, ylo, yhi] = [-2, 2, -1, 1];
  const t0 = performance.now();
  let labels;
  try {
    labels = basinMap(num("b-alpha"), $("b-dyn").value === "gad", num("b-eps"), xlo, xhi, ylo, yhi, nx, ny);
  } catch (e) {
    $("b-status").textContent = String(e);
    return;
  }
  const c = $("b-canvas"), ctx = c.getContext("2d");
  const w = c.width / nx, h = c.height / ny;
  const counts = new Array(COLORS.length).fill(0);
  for (let j = 0; j < ny; j++) {
    for (let i = 0; i < nx; i++) {
      const code = labels[j * nx + i];
      counts[code]++;
      ctx.fillStyle = COLORS[code];
      ctx.fillRect(i * w, c.height - (j + 1) * h, Math.ceil(w), Math.ceil(h));
    }
  }
  $("b-legend").innerHTML = labelNames()
    .map((name, k) => (counts[k] ? `<span><i style="background:${COLORS[k]}"></i>${name} (${counts[k]})</span>` : ""))
    .join("");
  $("b-status").textContent = `${nx}x${ny} cells in ${(performance.now() - t0).toFixed(0)} ms`;
}

function orbit() {
  let out;
  try {
    out = gadOrbit(num("g-alpha"), num("g-eps"), num("g-scale"), num("g-periods"));
  } catch (e) {
    $("g-status").textContent = String(e);
    return;
  }
  const predicted = out[0];
  let rmax = predicted;
  for (let k = 1; k < out.length; k += 2) rmax = Math.max(rmax, Math.hypot(out[k], out[k + 1]));
  const c = $("g-canvas"), ctx = c.getContext("2d");
  const s = (0.45 * c.width) / rmax, cx = c.width / 2, cy = c.height / 2;
  ctx.clearRect(0, 0, c.width, c.height);
  ctx.strokeStyle = "#e8590c";
  ctx.setLineDash([6, 4]);
  ctx.beginPath();
  ctx.arc(cx, cy, predicted * s, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.strokeStyle = "#1971c2";
  ctx.beginPath();
  for (let k = 1; k < out.length; k += 2) {
    const px = cx + out[k] * s, py = cy - out[k + 1] * s;
    k === 1 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
  }
  ctx.stroke();
  const last = Math.hypot(out[out.length - 2], out[out.length - 1]);
  $("g-status").textContent =
    `predicted radius ${predicted.toExponential(4)}, final distance ${last.toExponential(4)} (dashed: prediction)`;
}

const R_MAX = 3, W_MIN = -Math.PI, W_MAX = 2 * Math.PI;
let header = null;

function reducedAxes() {
  const c = $("r-canvas");
  return {
    c,
    ctx: c.getContext("2d"),
    px: (r) => (r / R_MAX) * c.width,
    py: (w) => c.height - ((w - W_MIN) / (W_MAX - W_MIN)) * c.height,
    inv: (x, y) => [(x / c.width) * R_MAX, W_MIN + ((c.height - y) / c.height) * (W_MAX - W_MIN)],
  };
}

function reducedReset() {
  const { c, ctx, px, py } = reducedAxes();
  ctx.clearRect(0, 0, c.width, c.height);
  try {
    header = reducedOrbit(num("r-alpha"), 1, 0, 0.01).slice(0, 4);
  } catch (e) {
    header = null;
    $("r-status").textContent = String(e);
    return;
  }
  const [r0, wp, wm, stable] = header;
  for (const [w, filled] of [[wp, stable === 1], [wm, stable === -1]]) {
    for (const shift of [-2 * Math.PI, 0, 2 * Math.PI]) {
      ctx.beginPath();
      ctx.arc(px(r0), py(w + shift), 5, 0, 2 * Math.PI);
      ctx.fillStyle = ctx.strokeStyle = "#c92a2a";
      filled ? ctx.fill() : ctx.stroke();
    }
  }
  $("r-status").textContent = `r0 = ${r0.toFixed(6)}, omega+ = ${wp.toFixed(4)}, omega- = ${wm.toFixed(4)}`;
}

function reducedClick(ev) {
  const { c, ctx, px, py, inv } = reducedAxes();
  const rect = c.getBoundingClientRect();
  const [r, w] = inv(ev.clientX - rect.left, ev.clientY - rect.top);
  let out;
  try {
    out = reducedOrbit(num("r-alpha"), r, w, num("r-tend"));
  } catch (e) {
    $("r-status").textContent = String(e);
    return;
  }
  ctx.strokeStyle = "#1971c2";
  ctx.beginPath();
  for (let k = 4; k < out.length; k += 3) {
    if (!Number.isFinite(out[k + 1])) break;
    const x = px(out[k + 1]), y = py(out[k + 2]);
    k === 4 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
  }
  ctx.stroke();
}

await init();
$("b-run").onclick = basin;
$("g-run").onclick = orbit;
$("r-clear").onclick = reducedReset;
$("r-alpha").onchange = reducedReset;
$("r-canvas").onclick = reducedClick;
basin();
orbit();
reducedReset();
