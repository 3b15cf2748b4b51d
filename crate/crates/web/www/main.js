import init, { analyze, generate, converge } from "./pkg/findim_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

function fmt(d) {
  if (d.kind === "Infinite") return "infinite";
  return d.value.toFixed(10);
}

function draw(a) {
  const c = $("plot");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const pts = a.points.map((p) => [p[0], p.length > 1 ? p[1] : 0]);
  const xs = pts.map((p) => p[0]);
  const ys = pts.map((p) => p[1]);
  const lo = [Math.min(...xs), Math.min(...ys)];
  const span = Math.max(Math.max(...xs) - lo[0], Math.max(...ys) - lo[1]) || 1;
  const pad = 30;
  const scale = (c.width - 2 * pad) / span;
  const at = (p) => [pad + (p[0] - lo[0]) * scale, c.height - pad - (p[1] - lo[1]) * scale];

  a.dim_fh.witness.forEach((set, k) => {
    g.strokeStyle = COLORS[k % COLORS.length];
    g.lineWidth = 2;
    for (let i = 0; i < set.length; i++) {
      for (let j = i + 1; j < set.length; j++) {
        const [x1, y1] = at(pts[set[i]]);
        const [x2, y2] = at(pts[set[j]]);
        g.beginPath();
        g.moveTo(x1, y1);
        g.lineTo(x2, y2);
        g.stroke();
      }
    }
  });
  pts.forEach((p, i) => {
    const [x, y] = at(p);
    g.fillStyle = a.focal.includes(i) ? "#b00" : "#222";
    g.beginPath();
    g.arc(x, y, 4, 0, 2 * Math.PI);
    g.fill();
  });
}

function show(a) {
  const rows = [
    ["points", a.points.length],
    ["diameter", a.diameter.toPrecision(8)],
    ["separation", a.separation.toPrecision(8)],
    ["covering diameter", a.covering_diameter.toPrecision(8)],
    ["focal points", a.focal.length ? a.focal.join(", ") : "none"],
    ["nearest-neighbor ratio", a.lambda.toPrecision(6)],
    ["Hausdorff dimension", fmt(a.dim_fh)],
    ["box dimension", fmt(a.dim_fb)],
    ["witness cover", a.dim_fh.witness.map((s) => "{" + s.join(",") + "}").join(" ") || "none"],
  ];
  $("result").innerHTML = rows.map(([k, v]) => `<dt>${k}</dt><dd>${v}</dd>`).join("");
}

function runAnalyze() {
  $("message").textContent = "";
  try {
    const a = JSON.parse(analyze($("points").value, $("metric").value));
    show(a);
    draw(a);
  } catch (e) {
    $("message").innerHTML = `<span class="error">${e.message ?? e}</span>`;
    $("result").innerHTML = "";
  }
}

function runGenerate() {
  try {
    $("points").value = generate($("family").value, Number($("level").value));
    $("metric").value = "l2";
    runAnalyze();
  } catch (e) {
    $("message").innerHTML = `<span class="error">${e.message ?? e}</span>`;
  }
}

function runConverge() {
  try {
    const csv = converge($("cfamily").value, Number($("from").value), Number($("to").value)).trim().split("\n");
    const cells = (line, tag) => line.split(",").map((x) => `<${tag}>${x}</${tag}>`).join("");
    $("table").innerHTML =
      "<table><tr>" + cells(csv[0], "th") + "</tr>" +
      csv.slice(1).map((l) => "<tr>" + cells(l, "td") + "</tr>").join("") + "</table>";
  } catch (e) {
    $("table").innerHTML = `<span class="error">${e.message ?? e}</span>`;
  }
}

await init();
$("analyze").addEventListener("click", runAnalyze);
$("generate").addEventListener("click", runGenerate);
$("converge").addEventListener("click", runConverge);
runAnalyze();
