// Drives the real Python service end to end: spawns `serve` on a scratch
// corpus, then exercises the client modules and the rendered DOM against
// live HTTP responses. Requires the forumqa package to be installed.

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { fetchDefaults, fetchThread, postQuery } from "../src/api.js";
import { formatPercent, renderMatches } from "../src/render.js";

const PORT = 18000 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

const QUESTIONS_TSV = [
  "query_id\ttitle\tcontent\ttags\tasked_at",
  "je32511i\tUnable to see demo video\twe did not watch the demo video and now its not there in the portal . Please help!!!\ttransporter_bot\t1515151515",
  "je0td4d1\tFloat Division Error\tSir we are trying to find center of color marker using moments\tplanter_bot\t1515152000",
  "jdbjt4ko\tblender problem\tWhen we are trying to move robot through loc send by xbee in blender blender stops responding\ttransporter_bot\t1515153000",
  "",
].join("\n");

const THREADS_TSV = [
  "query_id\tpost_index\tauthor_role\tbody",
  "je32511i\t0\tstudent\tSame problem here, the video tab is empty.",
  "je32511i\t1\tstaff\tThe demo video was re-uploaded under Unit 3; refresh the portal.",
  "",
].join("\n");

let server: ChildProcess;
let scratch: string;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    if ((await fetchDefaults(BASE)) !== null) {
      return;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service on ${BASE} never came up`);
}

beforeAll(async () => {
  scratch = mkdtempSync(join(tmpdir(), "forumqa-e2e-"));
  writeFileSync(join(scratch, "q.tsv"), QUESTIONS_TSV);
  writeFileSync(join(scratch, "t.tsv"), THREADS_TSV);
  server = spawn(
    "python3",
    [
      "-m", "forumqa.cli", "serve",
      "--questions", join(scratch, "q.tsv"),
      "--threads", join(scratch, "t.tsv"),
      "--dim", "64",
      "--port", String(PORT),
    ],
    { stdio: "ignore" },
  );
  await waitForService();
});

afterAll(() => {
  server?.kill();
  rmSync(scratch, { recursive: true, force: true });
});

describe("against the live service", () => {
  it("renders exactly the matches the API returned, in API order", async () => {
    const outcome = await postQuery(BASE, {
      title: "Unable to see demo video",
      content: "the demo video is not there in the portal",
      threshold: 0.2,
    });
    expect(outcome.kind).toBe("ok");
    if (outcome.kind !== "ok") {
      return;
    }
    expect(outcome.response.matches.length).toBeGreaterThan(0);

    const container = document.createElement("div");
    renderMatches(container, outcome.response.matches, () => {});
    const cards = [...container.querySelectorAll<HTMLElement>(".match-card")];
    expect(cards.map((c) => c.dataset.queryId)).toEqual(
      outcome.response.matches.map((m) => m.query_id),
    );
    cards.forEach((card, i) => {
      const match = outcome.response.matches[i]!;
      expect(card.querySelector(".match-rank")!.textContent).toBe(`#${match.rank}`);
      expect(card.querySelector(".match-overall")!.textContent).toBe(
        formatPercent(match.scores.n_sim),
      );
    });
    expect(cards[0]!.dataset.queryId).toBe("je32511i");
  });

  it("renders the likely-new state when nothing clears the threshold", async () => {
    const outcome = await postQuery(BASE, {
      title: "entirely unrelated wording",
      content: "nothing in the archive talks about this",
      threshold: 0.999,
    });
    expect(outcome.kind).toBe("ok");
    if (outcome.kind !== "ok") {
      return;
    }
    expect(outcome.response.matches).toEqual([]);
    const container = document.createElement("div");
    renderMatches(container, outcome.response.matches, () => {});
    expect(container.querySelector(".empty-state")!.textContent).toContain("likely new");
  });

  it("resolves threads per the status contract", async () => {
    expect((await fetchThread(BASE, "je32511i")).kind).toBe("ok");
    expect((await fetchThread(BASE, "je0td4d1")).kind).toBe("no-answer");
    expect((await fetchThread(BASE, "never-was")).kind).toBe("not-found");

    const withThread = await fetchThread(BASE, "je32511i");
    if (withThread.kind === "ok") {
      expect(withThread.thread.posts.map((p) => p.author_role)).toEqual(["student", "staff"]);
    }
  });

  it("surfaces validation problems as rejections, not crashes", async () => {
    const outcome = await postQuery(BASE, { title: "x", content: "", k: -2 });
    expect(outcome.kind).toBe("rejected");
    if (outcome.kind === "rejected") {
      expect(outcome.status).toBe(422);
      expect(outcome.detail.length).toBeGreaterThan(0);
    }
  });
});
