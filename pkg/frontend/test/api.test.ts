import { describe, expect, it, vi } from "vitest";

import { ApiError, createClient } from "../src/api.js";
import { fixtures } from "./fixtures.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("score round-trip", () => {
  it("posts the full weight vector and returns the payload untouched", async () => {
    const fetchMock = vi.fn(async (url: string, init?: RequestInit) => {
      expect(url).toBe("/api/score");
      expect(init?.method).toBe("POST");
      const body = JSON.parse(init!.body as string);
      expect(body.weights).toEqual(fixtures.configWeights);
      return jsonResponse(fixtures.score);
    });
    const client = createClient("", fetchMock);
    const response = await client.score({ ...fixtures.configWeights });
    expect(fetchMock).toHaveBeenCalledOnce();
    // the client must not transform any number
    expect(response).toEqual(fixtures.score);
    expect(response.dynamic.totals["3"]).toBe(54.63119874645863);
  });

  it("raises ApiError with the structured detail on 400", async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse({ detail: { field: "weights", message: "sum to 0.9" } }, 400),
    );
    const client = createClient("", fetchMock);
    await expect(client.score({ cost_total: 0.9 })).rejects.toThrowError(ApiError);
    await expect(client.score({ cost_total: 0.9 })).rejects.toThrow(/weights/);
  });

  it("passes the abort signal through", async () => {
    const controller = new AbortController();
    const fetchMock = vi.fn(async (_url: string, init?: RequestInit) => {
      expect(init?.signal).toBe(controller.signal);
      return jsonResponse(fixtures.score);
    });
    const client = createClient("", fetchMock);
    await client.score({ ...fixtures.configWeights }, controller.signal);
  });
});

describe("sensitivity round-trip", () => {
  it("returns the report exactly as served", async () => {
    const fetchMock = vi.fn(async (url: string) => {
      expect(url).toBe("/api/sensitivity");
      return jsonResponse(fixtures.sensitivitySelected);
    });
    const client = createClient("", fetchMock);
    const response = await client.sensitivity({ variant: "selectedCriteria" });
    expect(response.report.top_rank_frequency["2"]).toBe(100.0);
    expect(response).toEqual(fixtures.sensitivitySelected);
  });
});

describe("base url", () => {
  it("prefixes every path", async () => {
    const fetchMock = vi.fn(async (url: string) => {
      expect(url).toBe("http://example:9000/api/score");
      return jsonResponse(fixtures.score);
    });
    const client = createClient("http://example:9000", fetchMock);
    await client.score({ ...fixtures.configWeights });
  });
});
