import init, { arm_curves, split_curves, pvalue } from "./pkg/predrisk_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const fmt = (v) => (v === null || v === undefined ? "undefined" : Number(v).toPrecision(6));

function draw(curves) {
  const canvas = $("plot");
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const pad = 60;
  ctx.clearRect(0, 0, width, height);

  // visible range: where any curve is above 1e-6 of its peak
  let lo = Infinity, hi = -Infinity, top = 0;
  for (const c of curves) {
    const peak = Math.max(...c.curve.masses);
    top = Math.max(top, peak);
    c.curve.masses.forEach((m, i) => {
      if (m >= peak * 1e-6) {
        lo = Math.min(lo, c.curve.lo + i);
        hi = Math.max(hi, c.curve.lo + i);
      }
    });
  }
  if (hi === lo) { lo -= 1; hi += 1; }
  const x = (k) => pad + ((k - lo) / (hi - lo)) * (width - 2 * pad);
  const y = (m) => height - pad - (m / top) * (height - 2 * pad);

  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.font = "22px system-ui";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, height - pad);
  ctx.lineTo(width - pad, height - pad);
  ctx.stroke();
  const step = Math.max(1, Math.ceil((hi - lo) / 10));
  for (let k = lo; k <= hi; k += step) {
    ctx.fillText(String(k), x(k) - 10, height - pad + 28);
  }

  curves.forEach((c, n) => {
    ctx.strokeStyle = c.color;
    ctx.lineWidth = 3;
    ctx.beginPath();
    let started = false;
    c.curve.masses.forEach((m, i) => {
      const k = c.curve.lo + i;
      if (k < lo || k > hi) return;
      if (started) ctx.lineTo(x(k), y(m)); else { ctx.moveTo(x(k), y(m)); started = true; }
    });
    ctx.stroke();
    ctx.fillStyle = c.color;
    ctx.fillText(`${c.name} (mode ${c.curve.mode})`, width - pad - 380, pad + 30 * n);
  });
}

function guard(out, f) {
  try {
    out.classList.remove("err");
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

$("arms").onclick = () => guard($("summary"), () => {
  const r = JSON.parse(arm_curves(num("ne"), num("nu"), num("pe"), num("pu"), num("conc")));
  draw([
    { name: "exposed", color: "#c0392b", curve: r.exposed },
    { name: "unexposed", color: "#2471a3", curve: r.unexposed },
  ]);
  $("summary").textContent =
    `P(exposed more)    ${fmt(r.p_exposed_more)}\n` +
    `P(equal)           ${fmt(r.p_equal)}\n` +
    `P(unexposed more)  ${fmt(r.p_unexposed_more)}\n` +
    `effective RR       ${fmt(r.effective_rr)}`;
});

$("split").onclick = () => guard($("summary"), () => {
  const r = JSON.parse(split_curves(num("ne"), num("nu"), num("pe"), num("pu"), num("conc"), num("cov")));
  draw([
    { name: "split total", color: "#8e44ad", curve: r.split },
    { name: "all low", color: "#27ae60", curve: r.all_low },
  ]);
  const s = r.lives_saved;
  $("summary").textContent =
    `P(split total more)    ${fmt(r.comparison.p_split_more)}\n` +
    `P(equal)               ${fmt(r.comparison.p_equal)}\n` +
    `P(all-low total more)  ${fmt(r.comparison.p_all_low_more)}\n` +
    `split interval         [${s.split_interval.lo}, ${s.split_interval.hi}]\n` +
    `all-low interval       [${s.all_low_interval.lo}, ${s.all_low_interval.hi}]\n` +
    `lives saved, best case ${s.best_case}, most likely ${s.most_likely}`;
});

$("test").onclick = () => guard($("testout"), () => {
  const r = JSON.parse(pvalue(num("ca"), num("na"), num("cb"), num("nb"), $("cc").checked));
  $("testout").textContent =
    `statistic  ${fmt(r.statistic)}\np-value    ${fmt(r.p_value)}\n` +
    `relative risk estimate ${fmt(r.relative_risk)}\n` +
    (r.reject ? "rejects equal proportions at 0.05" : "does not reject at 0.05") +
    "\nThe test says nothing about what caused the difference.";
});

await init();
$("arms").click();
