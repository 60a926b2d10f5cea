/** Per-slot 3D viewport rendering preview parts with orbit controls. */

import * as THREE from "three";
import { OrbitControls } from "three/addons/controls/OrbitControls.js";
import type { PreviewDocument } from "../types.js";

const ROLE_COLORS: Record<string, number> = {
  layer: 0xd9a066,
  slat_x: 0xc98a4b,
  slat_y: 0x8fb36d,
  mold: 0x9aa7b0,
  casting: 0x6a8caf,
  wire_ring: 0xb0b0b8,
  wire_meridian: 0x8888cc,
  approximation: 0x7fc8c8,
};

export class SlotViewer {
  private renderer: THREE.WebGLRenderer;
  private scene: THREE.Scene;
  private camera: THREE.PerspectiveCamera;
  private controls: OrbitControls;
  private group: THREE.Group;
  private frame = 0;

  constructor(private container: HTMLElement) {
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setSize(container.clientWidth, container.clientHeight);
    container.appendChild(this.renderer.domElement);
    this.scene = new THREE.Scene();
    this.scene.background = new THREE.Color(0x20242b);
    this.camera = new THREE.PerspectiveCamera(
      45,
      container.clientWidth / Math.max(container.clientHeight, 1),
      0.1,
      5000,
    );
    this.camera.position.set(80, -120, 80);
    this.camera.up.set(0, 0, 1);
    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.55));
    const key = new THREE.DirectionalLight(0xffffff, 1.0);
    key.position.set(1, -2, 3);
    this.scene.add(key);
    this.group = new THREE.Group();
    this.scene.add(this.group);
    const animate = () => {
      this.frame = requestAnimationFrame(animate);
      this.controls.update();
      this.renderer.render(this.scene, this.camera);
    };
    animate();
  }

  /** Re-home the canvas after the slot panel is re-rendered. */
  attach(container: HTMLElement): void {
    this.container = container;
    container.appendChild(this.renderer.domElement);
    this.resize();
  }

  setPreview(preview: PreviewDocument): void {
    this.group.clear();
    const bounds = new THREE.Box3();
    for (const part of preview.parts) {
      const geometry = new THREE.BufferGeometry();
      const positions = new Float32Array(part.vertices.flat());
      geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
      geometry.setIndex(part.triangles.flat());
      geometry.computeVertexNormals();
      const material = new THREE.MeshStandardMaterial({
        color: ROLE_COLORS[part.color_role] ?? 0xcccccc,
        side: THREE.DoubleSide,
        transparent: part.color_role === "approximation",
        opacity: part.color_role === "approximation" ? 0.45 : 1.0,
      });
      const mesh = new THREE.Mesh(geometry, material);
      this.group.add(mesh);
      bounds.expandByObject(mesh);
    }
    if (!bounds.isEmpty()) {
      const center = bounds.getCenter(new THREE.Vector3());
      const size = bounds.getSize(new THREE.Vector3()).length() || 1;
      this.controls.target.copy(center);
      this.camera.position
        .copy(center)
        .add(new THREE.Vector3(size, -size * 1.2, size * 0.8));
    }
  }

  resize(): void {
    const { clientWidth, clientHeight } = this.container;
    this.renderer.setSize(clientWidth, clientHeight);
    this.camera.aspect = clientWidth / Math.max(clientHeight, 1);
    this.camera.updateProjectionMatrix();
  }

  dispose(): void {
    cancelAnimationFrame(this.frame);
    this.controls.dispose();
    this.renderer.dispose();
    this.renderer.domElement.remove();
  }
}
